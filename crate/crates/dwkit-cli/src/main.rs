mod cache;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use dwkit::cochains::{cohomology_with_budget, named_cocycle, CohomologyGroup, DEFAULT_BUDGET};
use dwkit::dw::{
    dpr_loop_cocycle, drinfeld_double_simple_count, dw_partition_torus, dw_torus_count, state_space_torus,
    torus_holonomy, transgress_iterated,
};
use dwkit::format::{
    cochain_from_json, cochain_to_json, extension_from_json, extension_from_shorthand, group_from_json,
    group_from_shorthand, group_to_json, invariant_record, report_to_json,
};
use dwkit::{anomaly_report, Cochain, Error, Extension, FiniteGroup, Verdict};
use serde_json::{json, Value};

use cache::Cache;

#[derive(Parser)]
#[command(name = "dwkit", version, about = "Finite-group cohomology, Dijkgraaf-Witten invariants and anomaly searches")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Directory for cached cohomology computations.
    #[arg(long, global = true, env = "DWKIT_CACHE")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect a group given as a file or a short name (`pauli`, `d8`, `cyclic 4`, ...).
    Group {
        #[arg(value_enum)]
        action: GroupAction,
        group: String,
    },
    /// Invariant factors and generators of H^n(G; U(1)).
    Cohomology {
        #[arg(long)]
        group: String,
        #[arg(long)]
        degree: usize,
        /// Skip the size budget.
        #[arg(long)]
        allow_large: bool,
    },
    /// Torus invariants of Dijkgraaf-Witten theories.
    Dw {
        #[command(subcommand)]
        which: DwCmd,
    },
    /// Run the obstruction searches for gauging the quotient of an extension.
    Anomaly {
        /// Extension file, or `pauli`, `cyclic N M`, `square N M`.
        #[arg(long)]
        extension: String,
        /// Cocycle file on D, or a catalog name such as `omega1`.
        #[arg(long)]
        cocycle: String,
        #[arg(long, default_value_t = 1)]
        modulus_multiplier: u64,
    },
    /// Transgress a cocycle to the gauge groupoid of a torus.
    Transgress {
        #[arg(long)]
        group: String,
        #[arg(long)]
        cocycle: String,
        #[arg(long, default_value_t = 1)]
        iterate: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupAction {
    Show,
    Validate,
}

#[derive(clap::Args)]
struct DwArgs {
    #[arg(long)]
    group: String,
    /// Cocycle file or catalog name.
    #[arg(long, conflicts_with = "untwisted")]
    cocycle: Option<String>,
    #[arg(long)]
    untwisted: bool,
    /// Torus dimension; defaults to the cocycle degree.
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Subcommand)]
enum DwCmd {
    /// Z(T^n) as an exact cyclotomic number.
    Torus(DwArgs),
    /// Z(T^n) as a count of simple objects.
    Simples(DwArgs),
    /// Simple modules of the twisted Drinfeld double, degree 3.
    Double(DwArgs),
    /// Basis of the state space on T^{n-1}.
    States(DwArgs),
}

type CliResult<T> = std::result::Result<T, String>;

fn lib<T>(r: dwkit::Result<T>) -> CliResult<T> {
    r.map_err(|e| e.to_string())
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: invalid JSON: {e}", path.display()))
}

fn load_group(input: &str) -> CliResult<Arc<FiniteGroup>> {
    let path = Path::new(input);
    let g = if path.is_file() {
        lib(group_from_json(&read_json(path)?))?
    } else {
        lib(group_from_shorthand(input))?
    };
    Ok(Arc::new(g))
}

fn load_cocycle(input: &str, group: &Arc<FiniteGroup>) -> CliResult<Cochain> {
    let path = Path::new(input);
    if path.is_file() {
        lib(cochain_from_json(&read_json(path)?, Some(group)))
    } else {
        lib(named_cocycle(group, input))
    }
}

fn load_extension(input: &str) -> CliResult<Extension> {
    let path = Path::new(input);
    if path.is_file() {
        lib(extension_from_json(&read_json(path)?))
    } else {
        lib(extension_from_shorthand(input))
    }
}

fn labels(g: &FiniteGroup, t: &[usize]) -> Vec<String> {
    t.iter().map(|&x| g.element_label(x).to_string()).collect()
}

struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, code: 0 }
    }
}

fn cmd_group(action: GroupAction, input: &str) -> CliResult<Output> {
    let g = load_group(input)?;
    if let GroupAction::Validate = action {
        return Ok(Output::ok(
            json!({"valid": true, "order": g.order(), "hash": g.canonical_hash()}),
            format!("valid group of order {}", g.order()),
        ));
    }
    let classes = g.conjugacy_classes();
    let center = g.center();
    let json = json!({
        "group": group_to_json(&g),
        "label": g.label(),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "center": labels(&g, &center),
        "conjugacy_classes": classes.iter().map(|c| labels(&g, c)).collect::<Vec<_>>(),
        "hash": g.canonical_hash(),
    });
    let text = format!(
        "group {}\norder {}\nabelian {}\ncenter order {}\nconjugacy classes {} (sizes {:?})",
        g.label(),
        g.order(),
        g.is_abelian(),
        center.len(),
        classes.len(),
        classes.iter().map(Vec::len).collect::<Vec<_>>()
    );
    Ok(Output::ok(json, text))
}

fn cmd_cohomology(cache: Option<&Cache>, group: &str, degree: usize, allow_large: bool) -> CliResult<Output> {
    let g = load_group(group)?;
    let budget = (!allow_large).then_some(DEFAULT_BUDGET);
    let h: CohomologyGroup = match cache {
        Some(c) => c.cohomology(&g, degree, budget),
        None => cohomology_with_budget(&g, degree, budget),
    }
    .map_err(|e| match e {
        Error::BudgetExceeded { .. } => format!("{e}; pass --allow-large to compute anyway"),
        e => e.to_string(),
    })?;
    let json = json!({
        "group": group_to_json(&g),
        "degree": degree,
        "factors": h.invariant_factors(),
        "generators": h.generators().iter().map(cochain_to_json).collect::<Vec<_>>(),
    });
    let text = format!("H^{degree}({}; U(1)) = {}", g.label(), factors_text(h.invariant_factors()));
    Ok(Output::ok(json, text))
}

fn factors_text(f: &[u64]) -> String {
    if f.is_empty() {
        return "0".into();
    }
    f.iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join(" x ")
}

fn dw_theta(args: &DwArgs) -> CliResult<Cochain> {
    let g = load_group(&args.group)?;
    let theta = match (&args.cocycle, args.dim) {
        (Some(c), dim) => {
            let theta = load_cocycle(c, &g)?;
            if let Some(d) = dim.filter(|&d| d != theta.degree()) {
                return Err(format!("--dim {d} differs from the cocycle degree {}", theta.degree()));
            }
            theta
        }
        (None, Some(d)) => Cochain::zero(g, d, 1),
        (None, None) => return Err("pass --cocycle, or --untwisted with --dim".into()),
    };
    Ok(theta)
}

fn cmd_dw(which: &DwCmd) -> CliResult<Output> {
    let (name, args) = match which {
        DwCmd::Torus(a) => ("torus_partition", a),
        DwCmd::Simples(a) => ("simple_count", a),
        DwCmd::Double(a) => ("drinfeld_double_simples", a),
        DwCmd::States(a) => ("state_space_dimension", a),
    };
    let theta = dw_theta(args)?;
    let g = theta.group().clone();
    let n = theta.degree();
    let mut record = match which {
        DwCmd::Torus(_) => invariant_record(name, &g, n, &lib(dw_partition_torus(&theta))?.to_string()),
        DwCmd::Simples(_) => invariant_record(name, &g, n, &lib(dw_torus_count(&theta))?.to_string()),
        DwCmd::Double(_) => invariant_record(name, &g, n, &lib(drinfeld_double_simple_count(&theta))?.to_string()),
        DwCmd::States(_) => {
            let s = lib(state_space_torus(&theta))?;
            let mut r = invariant_record(name, &g, n, &s.dimension().to_string());
            r["basis"] = s.basis_tuples().iter().map(|t| json!(labels(&g, t))).collect();
            r
        }
    };
    let text = format!("{name} of {} in degree {n}: {}", g.label(), record["value"].as_str().unwrap_or(""));
    if let DwCmd::States(_) = which {
        record["torus_dimension"] = json!(n.saturating_sub(1));
    }
    Ok(Output::ok(record, text))
}

fn cmd_anomaly(extension: &str, cocycle: &str, multiplier: u64) -> CliResult<Output> {
    let ext = load_extension(extension)?;
    let omega = load_cocycle(cocycle, ext.d())?;
    let report = lib(anomaly_report(&ext, &omega, multiplier))?;
    let mut text = vec![
        format!("verdict: {}", report.verdict),
        format!("degree: {}, working modulus: {}", report.degree, report.modulus),
        format!("invariant class: {}", report.invariant_class),
    ];
    if let Some(t) = report.first_obstruction_trivial {
        text.push(format!("first obstruction vanishes: {t}"));
    }
    if report.invariant_class && report.first_obstruction_trivial == Some(true) {
        text.push(format!("closed lift: {}", report.closed_lift.is_some()));
    }
    if let Some(bp) = &report.boundary_pair {
        if bp.theta_is_trivial() {
            text.push("boundary pair: theta trivial".into());
        } else {
            text.push(format!(
                "boundary pair: theta class {:?} in {}",
                bp.theta_class,
                factors_text(&bp.theta_factors)
            ));
        }
    }
    let code = if report.verdict == Verdict::AnomalyFree { 0 } else { 2 };
    Ok(Output {
        json: report_to_json(&report),
        text: text.join("\n"),
        code,
    })
}

fn cmd_transgress(group: &str, cocycle: &str, iterate: usize) -> CliResult<Output> {
    let g = load_group(group)?;
    let theta = load_cocycle(cocycle, &g)?;
    let t = lib(transgress_iterated(&theta, iterate))?;
    if !t.is_cocycle() {
        return Err("transgressed cochain is not closed".into());
    }
    let space = t.space();
    let values: Vec<Value> = t
        .entries()
        .map(|(x, h, p)| {
            json!({
                "holonomy": labels(&g, space.tuple(x)),
                "morphisms": labels(&g, &h),
                "value": p.to_string(),
            })
        })
        .collect();
    let mut json = json!({
        "group": group_to_json(&g),
        "source_degree": theta.degree(),
        "iterate": iterate,
        "degree": t.degree(),
        "modulus": t.modulus(),
        "values": values,
    });
    let mut text = vec![format!(
        "τ^{iterate} of a degree-{} cocycle on {}: degree {} on {} objects, {} nonzero values",
        theta.degree(),
        g.label(),
        t.degree(),
        space.tuples().len(),
        json["values"].as_array().map_or(0, Vec::len)
    )];
    if theta.degree() == 3 && iterate == 1 {
        let m = t == lib(dpr_loop_cocycle(&theta))?;
        json["dpr_match"] = json!(m);
        text.push(format!("matches the twisted-double cocycle: {m}"));
    }
    if iterate == theta.degree() {
        let mut m = true;
        for (x, tuple) in space.tuples().iter().enumerate() {
            m &= t.value(x, &[]) == lib(torus_holonomy(&theta, tuple))?;
        }
        json["torus_match"] = json!(m);
        text.push(format!("matches torus evaluation: {m}"));
    }
    Ok(Output::ok(json, text.join("\n")))
}

fn run(cli: &Cli) -> CliResult<Output> {
    let cache = match &cli.cache {
        Some(dir) => Some(Cache::new(dir).map_err(|e| format!("cache {}: {e}", dir.display()))?),
        None => None,
    };
    match &cli.cmd {
        Cmd::Group { action, group } => cmd_group(*action, group),
        Cmd::Cohomology {
            group,
            degree,
            allow_large,
        } => cmd_cohomology(cache.as_ref(), group, *degree, *allow_large),
        Cmd::Dw { which } => cmd_dw(which),
        Cmd::Anomaly {
            extension,
            cocycle,
            modulus_multiplier,
        } => cmd_anomaly(extension, cocycle, *modulus_multiplier),
        Cmd::Transgress {
            group,
            cocycle,
            iterate,
        } => cmd_transgress(group, cocycle, *iterate),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.json {
                true => serde_json::to_string_pretty(&out.json).expect("serializable"),
                false => out.text,
            };
            // A closed pipe (`dwkit ... | head`) is not an error.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(out.code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
