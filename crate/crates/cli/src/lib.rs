//! Command-line front end for `gck`.
//!
//! Exit codes: 0 success, 1 domain error (bad length, bad element, wrong group
//! kind), 2 internal inconsistency or failed fixture, 64 usage error.

pub mod args;
pub mod parse;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use gck::circulant::{check_multiplicities, psd_equivalence};
use gck::fixtures::PaperOrder;
use gck::kraus::apply_decomposition;
use gck::lengths::kernel_sweep_on;
use gck::{
    apply_semigroup, build_circulant, decompose, is_cond_negative_constraints,
    is_cond_negative_definition, is_convex, kernel_sweep, make_length, phi, spectral_decompose,
    t_grid, validate_table, CharacterTable, Complex64, FiniteGroup, GroupAlgebraElement,
    GroupDescriptor, LengthFunction, Tolerances,
};
use serde::Serialize;
use serde_json::{json, Value};

pub use args::{Command, Format, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Domain(_) => EXIT_DOMAIN,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<gck::Error> for Failure {
    fn from(e: gck::Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

/// A rendered report and the exit code it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    group: Option<&'a str>,
    ordering_hash: Option<String>,
    seed: u64,
    tolerances: Tolerances,
    result: Value,
}

struct Context {
    descriptor: String,
    g: FiniteGroup,
    ct: CharacterTable,
    paper: Option<PaperOrder>,
}

impl Context {
    fn new(group: &str, paper_order: bool, seed: u64) -> Result<Self, Failure> {
        let descriptor: GroupDescriptor = group.parse().map_err(|e: gck::Error| Failure::Domain(e.to_string()))?;
        let descriptor = descriptor.to_string();
        let paper = if paper_order {
            Some(PaperOrder::builtin(&descriptor).ok_or_else(|| {
                Failure::Usage(format!("--paper-order is available for S3, Q8 and S4, not {descriptor}"))
            })?)
        } else {
            None
        };
        let g = gck::build_group(&descriptor)?;
        let ct = gck::characters::character_table_seeded(&g, seed)?;
        Ok(Context {
            descriptor,
            g,
            ct,
            paper,
        })
    }

    fn classes_in<T: Copy + Default>(&self, v: &[T]) -> Result<Vec<T>, Failure> {
        match &self.paper {
            Some(p) => Ok(p.classes_to_canonical(v)?),
            None => Ok(v.to_vec()),
        }
    }

    fn classes_out<T: Copy>(&self, v: &[T]) -> Vec<T> {
        match &self.paper {
            Some(p) => p.classes_to_paper(v).expect("per-class vector"),
            None => v.to_vec(),
        }
    }

    fn irreps_out<T: Copy>(&self, v: &[T]) -> Vec<T> {
        match &self.paper {
            Some(p) => p.irreps_to_paper(v).expect("per-irrep vector"),
            None => v.to_vec(),
        }
    }

    fn order_name(&self) -> &'static str {
        if self.paper.is_some() {
            "paper"
        } else {
            "canonical"
        }
    }

    fn length(&self, values: &[f64]) -> Result<LengthFunction, Failure> {
        Ok(make_length(&self.g, &self.classes_in(values)?)?)
    }
}

fn envelope(config: &RunConfig, ctx: Option<&Context>, result: Value) -> Result<String, Failure> {
    let env = Envelope {
        schema: SCHEMA,
        tool: "gck",
        version: env!("CARGO_PKG_VERSION"),
        command: config.command.name(),
        group: ctx.map(|c| c.descriptor.as_str()),
        ordering_hash: ctx.map(|c| c.g.ordering_hash()),
        seed: config.seed,
        tolerances: Tolerances::default(),
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| Failure::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Comment lines carrying the report metadata ahead of CSV data.
fn csv_header(config: &RunConfig, ctx: &Context) -> String {
    format!(
        "# schema={SCHEMA} tool=gck version={} command={} group={} ordering_hash={} seed={}\n",
        env!("CARGO_PKG_VERSION"),
        config.command.name(),
        ctx.descriptor,
        ctx.g.ordering_hash(),
        config.seed
    )
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn ok(output: String) -> Result<Outcome, Failure> {
    Ok(Outcome { code: EXIT_OK, output })
}

fn csv_rows(rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r).map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Internal(e.to_string()))
}

/// Execute one command and render its report.
pub fn run(config: &RunConfig) -> Result<Outcome, Failure> {
    if config.format == Format::Csv && !matches!(config.command, Command::Sweep { .. }) {
        return Err(Failure::Usage(format!(
            "--format csv is only available for sweep, not {}",
            config.command.name()
        )));
    }
    match &config.command {
        Command::GroupInfo { group, table } => group_info(config, group, *table),
        Command::Chartable { group, paper_order } => chartable(config, group, *paper_order),
        Command::CheckLength { length } => {
            let ctx = Context::new(&length.group, length.paper_order, config.seed)?;
            check_length(config, &ctx, &length.lengths.0)
        }
        Command::Decompose { length, t } => {
            let ctx = Context::new(&length.group, length.paper_order, config.seed)?;
            let l = ctx.length(&length.lengths.0)?;
            let k = decompose(&ctx.ct, &l, *t)?;
            let convex = is_convex(&ctx.ct, &l, &t_grid())?;
            let result = json!({
                "order": ctx.order_name(),
                "t": k.t,
                "p": ctx.irreps_out(&k.p),
                "alpha": ctx.irreps_out(&k.alpha),
                "sum_rule_residual": k.sum_rule_residual,
                "min_p": k.min(),
                "convex_for_all_t": convex,
            });
            ok(envelope(config, Some(&ctx), result)?)
        }
        Command::Evolve { length, t, element } => {
            let ctx = Context::new(&length.group, length.paper_order, config.seed)?;
            let l = ctx.length(&length.lengths.0)?;
            let coeffs = parse::parse_element(element).map_err(Failure::Domain)?;
            let x = GroupAlgebraElement::from_coeffs(&ctx.g, coeffs)?;
            let direct = apply_semigroup(&ctx.g, &l, *t, &x)?;
            let k = decompose(&ctx.ct, &l, *t)?;
            let via = apply_decomposition(&ctx.g, &ctx.ct, &k, &x)?;
            let residual = direct.max_abs_diff(&via);
            if residual > 1e-10 {
                return Err(Failure::Internal(format!("decomposition residual {residual:e}")));
            }
            let result = json!({
                "t": t,
                "input": x.coeffs,
                "output": direct.coeffs,
                "decomposition_residual": residual,
            });
            ok(envelope(config, Some(&ctx), result)?)
        }
        Command::Sweep {
            length,
            t_min,
            t_max,
            points,
            spacing,
        } => {
            let ctx = Context::new(&length.group, length.paper_order, config.seed)?;
            let l = ctx.length(&length.lengths.0)?;
            sweep(config, &ctx, &l, (*t_min, *t_max, *points, *spacing))
        }
        Command::Circulant {
            group,
            class_function,
            class_function_imag,
            paper_order,
            dump_matrix,
        } => {
            let ctx = Context::new(group, *paper_order, config.seed)?;
            let re = &class_function.0;
            let im = match class_function_imag {
                Some(v) if v.0.len() != re.len() => {
                    return Err(Failure::Domain(format!(
                        "{} real parts but {} imaginary parts",
                        re.len(),
                        v.0.len()
                    )))
                }
                Some(v) => v.0.clone(),
                None => vec![0.0; re.len()],
            };
            let f: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
            circulant(config, &ctx, &ctx.classes_in(&f)?, *dump_matrix)
        }
        Command::VerifyPaper {
            only,
            inject_corruption,
        } => {
            if let Some(o) = only.as_deref().filter(|o| !verify::is_fixture(o)) {
                return Err(Failure::Usage(format!(
                    "unknown fixture `{o}`; known: {}",
                    verify::FIXTURES.join(", ")
                )));
            }
            if let Some(c) = inject_corruption.as_deref().filter(|c| !verify::is_corruptible(c)) {
                return Err(Failure::Usage(format!("cannot corrupt `{c}`")));
            }
            let report = verify::verify_paper(only.as_deref(), inject_corruption.as_deref(), config.seed);
            let code = if report.passed { EXIT_OK } else { EXIT_INTERNAL };
            Ok(Outcome {
                code,
                output: envelope(config, None, to_value(&report))?,
            })
        }
    }
}

fn group_info(config: &RunConfig, group: &str, table: bool) -> Result<Outcome, Failure> {
    let ctx = Context::new(group, false, config.seed)?;
    let g = &ctx.g;
    let cl = g.classes();
    let classes: Vec<Value> = (0..g.num_classes())
        .map(|c| {
            let rep = cl.representative(c);
            json!({
                "index": c,
                "size": cl.class_sizes[c],
                "representative": rep,
                "representative_permutation": g.permutation(rep).map(|p| p.iter().map(|&x| x as usize + 1).collect::<Vec<_>>()),
                "inverse_class": cl.inverse_class[c],
                "elements": cl.classes[c],
            })
        })
        .collect();
    let mut result = json!({
        "order": g.order(),
        "num_classes": g.num_classes(),
        "is_abelian": g.is_abelian(),
        "center": g.center(),
        "class_sizes": cl.class_sizes,
        "classes": classes,
    });
    if table {
        result["multiplication_table"] = to_value(&g.mul_table());
    }
    ok(envelope(config, Some(&ctx), result)?)
}

fn chartable(config: &RunConfig, group: &str, paper_order: bool) -> Result<Outcome, Failure> {
    let ctx = Context::new(group, paper_order, config.seed)?;
    let k = ctx.ct.num_irreps();
    let rows: Vec<Vec<Complex64>> = (0..k).map(|r| ctx.classes_out(&ctx.ct.row(r))).collect();
    let result = json!({
        "order": ctx.order_name(),
        "class_sizes": ctx.classes_out(&ctx.ct.class_sizes),
        "degrees": ctx.irreps_out(&ctx.ct.degrees),
        "chi": ctx.irreps_out(&(0..k).collect::<Vec<_>>()).iter().map(|&r| &rows[r]).collect::<Vec<_>>(),
        "validation": validate_table(&ctx.ct),
    });
    ok(envelope(config, Some(&ctx), result)?)
}

fn check_length(config: &RunConfig, ctx: &Context, values: &[f64]) -> Result<Outcome, Failure> {
    let l = ctx.length(values)?;
    let definition = is_cond_negative_definition(&ctx.g, &l)?;
    let constraints = is_cond_negative_constraints(&ctx.ct, &l)?;
    let sweep = kernel_sweep(&ctx.g, &l)?;
    let phi = phi(&ctx.ct, &l)?;
    let boundary_distance = phi
        .constrained()
        .iter()
        .map(|x| x.abs())
        .fold(f64::INFINITY, f64::min);
    let agree = definition.holds == constraints && constraints == sweep.holds;
    let result = json!({
        "order": ctx.order_name(),
        "lengths": ctx.classes_out(l.values()),
        "strict": l.is_strict(),
        "phi": ctx.irreps_out(&phi.full),
        "verdicts": {
            "definition": definition.holds,
            "constraints": constraints,
            "kernel_sweep": sweep.holds,
        },
        "conditionally_negative": agree && constraints,
        "routes_agree": agree,
        "boundary_distance": if boundary_distance.is_finite() { Some(boundary_distance) } else { None },
        "definition_max_eigenvalue": definition.max_eigenvalue,
        "kernel_first_failure": sweep.first_failure(),
    });
    let code = if agree || boundary_distance <= 1e-7 {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    };
    Ok(Outcome {
        code,
        output: envelope(config, Some(ctx), result)?,
    })
}

fn sweep(
    config: &RunConfig,
    ctx: &Context,
    l: &LengthFunction,
    (t_min, t_max, points, spacing): (f64, f64, usize, args::Spacing),
) -> Result<Outcome, Failure> {
    // the kernel at t = 0 is the all-ones matrix and says nothing
    if points == 0 || t_min <= 0.0 || t_max < t_min {
        return Err(Failure::Usage("sweep needs 0 < t-min <= t-max and at least one point".into()));
    }
    let grid: Vec<f64> = (0..points)
        .map(|i| {
            let s = if points == 1 { 0.0 } else { i as f64 / (points - 1) as f64 };
            match spacing {
                args::Spacing::Linear => t_min + s * (t_max - t_min),
                args::Spacing::Log => (t_min.ln() + s * (t_max.ln() - t_min.ln())).exp(),
            }
        })
        .collect();
    let kernel = kernel_sweep_on(&ctx.g, l, &grid)?;
    let mut rows = Vec::with_capacity(points);
    for (t, kp) in grid.iter().zip(&kernel.points) {
        let k = decompose(&ctx.ct, l, *t)?;
        rows.push((*t, ctx.irreps_out(&k.p), k.min(), kp.min_eigenvalue, kp.psd));
    }
    match config.format {
        Format::Csv => {
            let k = ctx.ct.num_irreps();
            let mut table = vec![std::iter::once("t".to_string())
                .chain((1..=k).map(|i| format!("p{i}")))
                .chain(["min_p".into(), "kernel_min_eigenvalue".into(), "kernel_psd".into()])
                .collect::<Vec<_>>()];
            for (t, p, m, e, psd) in &rows {
                table.push(
                    std::iter::once(t.to_string())
                        .chain(p.iter().map(|x| x.to_string()))
                        .chain([m.to_string(), e.to_string(), psd.to_string()])
                        .collect(),
                );
            }
            ok(csv_header(config, ctx) + &csv_rows(&table)?)
        }
        Format::Json => {
            let points: Vec<Value> = rows
                .iter()
                .map(|(t, p, m, e, psd)| {
                    json!({ "t": t, "p": p, "min_p": m, "kernel_min_eigenvalue": e, "kernel_psd": psd })
                })
                .collect();
            let result = json!({ "order": ctx.order_name(), "points": points });
            ok(envelope(config, Some(ctx), result)?)
        }
    }
}

fn circulant(config: &RunConfig, ctx: &Context, f: &[Complex64], dump: bool) -> Result<Outcome, Failure> {
    let a = build_circulant(&ctx.g, f)?;
    if dump {
        let n = ctx.g.order();
        let mut table = vec![(0..n).flat_map(|j| [format!("re{j}"), format!("im{j}")]).collect::<Vec<_>>()];
        for i in 0..n {
            table.push(
                (0..n)
                    .flat_map(|j| {
                        let z = a.matrix[(i, j)];
                        [z.re.to_string(), z.im.to_string()]
                    })
                    .collect(),
            );
        }
        return ok(csv_header(config, ctx) + &csv_rows(&table)?);
    }
    let spectrum = spectral_decompose(&a, &ctx.g, &ctx.ct)?;
    let multiplicities = check_multiplicities(&spectrum);
    let verdicts = if (f[0] - 1.0).norm() <= 1e-12 {
        let r = psd_equivalence(&ctx.ct, &ctx.g, f)?;
        json!({
            "dense": r.dense_psd,
            "coefficients": r.coefficients_nonnegative,
            "log_length_cond_negative": r.log_length_cond_negative,
        })
    } else {
        let dense = spectrum.dense.first().is_none_or(|&x| x >= -gck::tol::PSD);
        let coeffs = spectrum.irreps.iter().all(|e| e.coefficient >= -gck::tol::PSD);
        if dense != coeffs {
            return Err(Failure::Internal("dense and coefficient PSD verdicts differ".into()));
        }
        json!({ "dense": dense, "coefficients": coeffs, "log_length_cond_negative": null })
    };
    let eigenvalues = ctx.irreps_out(&(0..spectrum.irreps.len()).collect::<Vec<_>>());
    let result = json!({
        "order": ctx.order_name(),
        "hermitian": a.hermitian,
        "psd_verdicts": verdicts,
        "eigenvalues": eigenvalues.iter().map(|&r| &spectrum.irreps[r]).collect::<Vec<_>>(),
        "multiplicities": multiplicities,
        "max_mismatch": spectrum.max_mismatch,
    });
    ok(envelope(config, Some(ctx), result)?)
}

/// Parse `args`, run, and write the report. Returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match run(&config) {
        Ok(outcome) => {
            let written = match &config.out {
                Some(path) => std::fs::write(path, &outcome.output).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(outcome.output.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_DOMAIN
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.exit_code()
        }
    }
}
