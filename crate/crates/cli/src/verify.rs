//! Fixtures reproducing the published S3, Q8 and S4 computations.

use gck::circulant::check_multiplicities;
use gck::fixtures::{golden_deviation, golden_table, PaperOrder};
use gck::lengths::kernel_sweep;
use gck::{
    build_circulant, build_group, decompose, is_cond_negative_constraints,
    is_cond_negative_definition, is_convex, make_length, projection_family, spectral_decompose,
    t_grid, CharacterTable, Complex64, FiniteGroup, LengthFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const FIXTURES: &[&str] = &[
    "s3-table",
    "q8-table",
    "s4-table",
    "s3-verdicts",
    "s3-boundary",
    "q8-condition",
    "s4-appendix",
    "printed-coefficients",
    "multiplicities",
];

const CORRUPTIBLE: &[&str] = &["s3-table", "q8-table", "s4-table"];

const SAMPLES: usize = 200;
const BOUNDARY_EXCLUSION: f64 = 1e-7;
const VIOLATION_MARGIN: f64 = 1e-3;
const COEFFICIENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FixtureResult {
    pub name: String,
    pub groups: Vec<GroupRef>,
    pub passed: bool,
    pub samples: usize,
    /// Worst deviation or margin observed, where meaningful.
    pub metric: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GroupRef {
    pub descriptor: String,
    pub ordering_hash: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerifyReport {
    pub passed: bool,
    pub fixtures: Vec<FixtureResult>,
}

pub fn is_fixture(name: &str) -> bool {
    FIXTURES.contains(&name)
}

pub fn is_corruptible(name: &str) -> bool {
    CORRUPTIBLE.contains(&name)
}

struct Setup {
    g: FiniteGroup,
    ct: CharacterTable,
    order: PaperOrder,
}

impl Setup {
    fn new(name: &str, seed: u64) -> gck::Result<Self> {
        let g = build_group(name)?;
        let ct = gck::characters::character_table_seeded(&g, seed)?;
        let order = PaperOrder::builtin(name).expect("published group");
        Ok(Setup { g, ct, order })
    }

    fn group_ref(&self) -> GroupRef {
        GroupRef {
            descriptor: self.g.name().to_string(),
            ordering_hash: self.g.ordering_hash(),
        }
    }

    fn length(&self, paper: &[f64]) -> gck::Result<LengthFunction> {
        make_length(&self.g, &self.order.classes_to_canonical(paper)?)
    }

    fn routes(&self, l: &LengthFunction) -> gck::Result<[bool; 3]> {
        Ok([
            is_cond_negative_definition(&self.g, l)?.holds,
            is_cond_negative_constraints(&self.ct, l)?,
            kernel_sweep(&self.g, l)?.holds,
        ])
    }
}

struct Outcome {
    passed: bool,
    samples: usize,
    metric: Option<f64>,
    detail: String,
}

/// Run every fixture, or only `only`. `corrupt` names a table fixture whose
/// golden copy is perturbed before comparison.
pub fn verify_paper(only: Option<&str>, corrupt: Option<&str>, seed: u64) -> VerifyReport {
    let fixtures: Vec<FixtureResult> = FIXTURES
        .iter()
        .filter(|f| only.is_none_or(|o| o == **f))
        .map(|&name| run_fixture(name, corrupt == Some(name), seed))
        .collect();
    VerifyReport {
        passed: fixtures.iter().all(|f| f.passed),
        fixtures,
    }
}

fn groups_of(name: &str) -> &'static [&'static str] {
    match name {
        "s3-table" | "s3-verdicts" | "s3-boundary" => &["S3"],
        "q8-table" | "q8-condition" => &["Q8"],
        "s4-table" | "s4-appendix" => &["S4"],
        _ => &["S3", "Q8", "S4"],
    }
}

fn run_fixture(name: &str, corrupt: bool, seed: u64) -> FixtureResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let setups: gck::Result<Vec<Setup>> = groups_of(name).iter().map(|g| Setup::new(g, seed)).collect();
    let (groups, outcome) = match setups {
        Ok(setups) => {
            let groups = setups.iter().map(Setup::group_ref).collect();
            let outcome = match name {
                "s3-table" | "q8-table" | "s4-table" => table(&setups[0], corrupt),
                "s3-verdicts" => s3_verdicts(&setups[0]),
                "s3-boundary" => s3_boundary(&setups[0], &mut rng),
                "q8-condition" => q8_condition(&setups[0], &mut rng),
                "s4-appendix" => s4_appendix(&setups[0], &mut rng),
                "printed-coefficients" => printed_coefficients(&setups, &mut rng),
                "multiplicities" => multiplicities(&setups, &mut rng),
                _ => unreachable!("unknown fixture {name}"),
            };
            (groups, outcome)
        }
        Err(e) => (Vec::new(), Err(e)),
    };
    let outcome = outcome.unwrap_or_else(|e| Outcome {
        passed: false,
        samples: 0,
        metric: None,
        detail: format!("error: {e}"),
    });
    FixtureResult {
        name: name.to_string(),
        groups,
        passed: outcome.passed,
        samples: outcome.samples,
        metric: outcome.metric,
        detail: outcome.detail,
    }
}

fn table(s: &Setup, corrupt: bool) -> gck::Result<Outcome> {
    let mut golden = golden_table(s.g.name()).expect("published group");
    if corrupt {
        golden.chi[1][1] += 1;
    }
    let dev = golden_deviation(&s.ct, &s.order, &golden)?;
    Ok(Outcome {
        passed: dev <= gck::tol::TABLE,
        samples: 1,
        metric: Some(dev),
        detail: format!("max entrywise deviation from the printed table {dev:e}"),
    })
}

fn s3_verdicts(s: &Setup) -> gck::Result<Outcome> {
    let grid = t_grid();
    let bad = s.length(&[0.0, 1.0, 2.0])?;
    let good = s.length(&[0.0, 1.0, 2f64.sqrt()])?;
    let rb = s.routes(&bad)?;
    let rg = s.routes(&good)?;
    let cb = is_convex(&s.ct, &bad, &grid)?.convex;
    let cg = is_convex(&s.ct, &good, &grid)?.convex;
    Ok(Outcome {
        passed: rb == [false; 3] && rg == [true; 3] && !cb && cg,
        samples: 2,
        metric: None,
        detail: format!("(0,1,2): routes {rb:?}, convex {cb}; (0,1,sqrt2): routes {rg:?}, convex {cg}"),
    })
}

fn agreement(
    s: &Setup,
    samples: impl Iterator<Item = (Vec<f64>, f64)>,
) -> gck::Result<(usize, usize, usize, Vec<String>)> {
    let (mut checked, mut accepted, mut excluded) = (0, 0, 0);
    let mut failures = Vec::new();
    for (paper, margin) in samples {
        if margin.abs() <= BOUNDARY_EXCLUSION {
            excluded += 1;
            continue;
        }
        checked += 1;
        let expected = margin >= 0.0;
        accepted += expected as usize;
        let r = s.routes(&s.length(&paper)?)?;
        if r.iter().any(|&v| v != expected) {
            failures.push(format!("{paper:?} expected {expected}, routes {r:?}"));
        }
    }
    Ok((checked, accepted, excluded, failures))
}

fn s3_boundary(s: &Setup, rng: &mut ChaCha8Rng) -> gck::Result<Outcome> {
    let samples: Vec<_> = (0..SAMPLES)
        .map(|_| {
            let (l2, l3) = (rng.random_range(0.0..3.0), rng.random_range(0.0..3.0));
            (vec![0.0, l2, l3], l2 - 2.0 * l3 / 3.0)
        })
        .collect();
    let (checked, accepted, excluded, failures) = agreement(s, samples.into_iter())?;
    Ok(Outcome {
        passed: failures.is_empty(),
        samples: checked,
        metric: None,
        detail: summary("l2 >= (2/3) l3", checked, accepted, excluded, &failures),
    })
}

fn q8_condition(s: &Setup, rng: &mut ChaCha8Rng) -> gck::Result<Outcome> {
    let samples: Vec<_> = (0..SAMPLES)
        .map(|_| {
            let [l2, l3, l4, l5]: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
            let bound = (2.0 * l4 + 2.0 * l5 - 2.0 * l3)
                .min(2.0 * l3 + 2.0 * l5 - 2.0 * l4)
                .min(2.0 * l3 + 2.0 * l4 - 2.0 * l5);
            (vec![0.0, l2, l3, l4, l5], bound - l2)
        })
        .collect();
    let (checked, accepted, excluded, failures) = agreement(s, samples.into_iter())?;
    Ok(Outcome {
        passed: failures.is_empty(),
        samples: checked,
        metric: None,
        detail: summary("l2 <= min{...}", checked, accepted, excluded, &failures),
    })
}

fn summary(law: &str, checked: usize, accepted: usize, excluded: usize, failures: &[String]) -> String {
    let mut s = format!("{law}: {checked} samples ({accepted} accepted, {excluded} near the boundary skipped)");
    if let Some(f) = failures.first() {
        s.push_str(&format!(", {} disagreements, first {f}", failures.len()));
    }
    s
}

/// `24 p_i'(0)`, i = 2..5, in published order.
fn s4_constraints([l2, l3, l4, l5]: [f64; 4]) -> [f64; 4] {
    [
        -6.0 * l2 + 3.0 * l4 + 6.0 * l5,
        8.0 * l3 - 6.0 * l4,
        6.0 * l2 + 3.0 * l4 - 6.0 * l5,
        6.0 * l2 - 8.0 * l3 - 3.0 * l4 + 6.0 * l5,
    ]
}

fn s4_appendix(s: &Setup, rng: &mut ChaCha8Rng) -> gck::Result<Outcome> {
    let grid = t_grid();
    let small_t: Vec<f64> = [-24.0f64, -20.0, -16.0, -12.0, -8.0].iter().map(|e| e.exp2()).collect();
    let (mut inside, mut outside) = (0, 0);
    let (mut inside_min, mut bad_inside, mut bad_outside) = (f64::INFINITY, 0, 0);
    while inside < SAMPLES || outside < SAMPLES {
        let l: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
        let c = s4_constraints(l);
        let violated = c.iter().filter(|&&x| x < 0.0).count();
        let len = || s.length(&[0.0, l[0], l[1], l[2], l[3]]);
        if violated == 0 && inside < SAMPLES {
            inside += 1;
            let len = len()?;
            let mut m = f64::INFINITY;
            for &t in &grid {
                m = m.min(decompose(&s.ct, &len, t)?.min());
            }
            inside_min = inside_min.min(m);
            if m < -gck::tol::PSD || !is_cond_negative_constraints(&s.ct, &len)? {
                bad_inside += 1;
            }
        } else if violated == 1 && outside < SAMPLES && c.iter().all(|&x| x >= 0.0 || x <= -VIOLATION_MARGIN) {
            outside += 1;
            let len = len()?;
            let mut negative = false;
            for &t in &small_t {
                negative |= decompose(&s.ct, &len, t)?.min() < 0.0;
            }
            if !negative || is_cond_negative_constraints(&s.ct, &len)? {
                bad_outside += 1;
            }
        }
    }
    Ok(Outcome {
        passed: bad_inside == 0 && bad_outside == 0,
        samples: inside + outside,
        metric: Some(inside_min),
        detail: format!(
            "{inside} inside the polytope (min p {inside_min:e}, {bad_inside} failures); \
             {outside} violating one constraint ({bad_outside} without a negative p at small t)"
        ),
    })
}

/// The printed closed forms of p_i(t) for S3, Q8 and S4.
fn printed(group: &str, l: &[f64], t: f64) -> Vec<f64> {
    let e: Vec<f64> = l.iter().map(|v| (-t * v).exp()).collect();
    match group {
        "S3" => vec![
            (1.0 + 3.0 * e[1] + 2.0 * e[2]) / 6.0,
            (2.0 - 2.0 * e[2]) / 6.0,
            (1.0 - 3.0 * e[1] + 2.0 * e[2]) / 6.0,
        ],
        "Q8" => vec![
            (1.0 + e[1] + 2.0 * e[2] + 2.0 * e[3] + 2.0 * e[4]) / 8.0,
            (1.0 + e[1] + 2.0 * e[2] - 2.0 * e[3] - 2.0 * e[4]) / 8.0,
            (1.0 + e[1] - 2.0 * e[2] + 2.0 * e[3] - 2.0 * e[4]) / 8.0,
            (1.0 + e[1] - 2.0 * e[2] - 2.0 * e[3] + 2.0 * e[4]) / 8.0,
            (2.0 - 2.0 * e[1]) / 8.0,
        ],
        _ => vec![
            (1.0 + 6.0 * e[1] + 8.0 * e[2] + 3.0 * e[3] + 6.0 * e[4]) / 24.0,
            (1.0 + 2.0 * e[1] - e[3] - 2.0 * e[4]) / 8.0,
            (1.0 - 4.0 * e[2] + 3.0 * e[3]) / 12.0,
            (1.0 - 2.0 * e[1] - e[3] + 2.0 * e[4]) / 8.0,
            (1.0 - 6.0 * e[1] + 8.0 * e[2] + 3.0 * e[3] - 6.0 * e[4]) / 24.0,
        ],
    }
}

fn printed_coefficients(setups: &[Setup], rng: &mut ChaCha8Rng) -> gck::Result<Outcome> {
    let mut worst = 0.0f64;
    let mut samples = 0;
    for s in setups {
        for _ in 0..SAMPLES / 4 {
            let mut paper: Vec<f64> = (0..s.order.len()).map(|_| rng.random_range(0.0..3.0)).collect();
            paper[0] = 0.0;
            let t = rng.random_range(0.0..4.0);
            let p = s.order.irreps_to_paper(&decompose(&s.ct, &s.length(&paper)?, t)?.p)?;
            for (x, y) in p.iter().zip(printed(s.g.name(), &paper, t)) {
                worst = worst.max((x - y).abs());
            }
            samples += 1;
        }
    }
    Ok(Outcome {
        passed: worst <= COEFFICIENT_TOL,
        samples,
        metric: Some(worst),
        detail: format!("max deviation from the printed p_i(t) {worst:e}"),
    })
}

fn multiplicities(setups: &[Setup], rng: &mut ChaCha8Rng) -> gck::Result<Outcome> {
    let mut problems = Vec::new();
    let mut samples = 0;
    for s in setups {
        let ranks = s.order.irreps_to_paper(&projection_family(&s.ct, &s.g)?.ranks)?;
        let expected: Vec<usize> = s.order.irreps_to_paper(&s.ct.degrees)?.iter().map(|d| d * d).collect();
        if ranks != expected {
            problems.push(format!("{}: ranks {ranks:?}", s.g.name()));
        }
        let inv = &s.g.classes().inverse_class;
        let mut done = 0;
        while done < 20 {
            let mut f = vec![Complex64::new(0.0, 0.0); inv.len()];
            for c in 0..f.len() {
                f[c] = if inv[c] < c {
                    f[inv[c]].conj()
                } else if inv[c] == c {
                    Complex64::new(rng.random_range(-1.0..1.0), 0.0)
                } else {
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                };
            }
            let spec = spectral_decompose(&build_circulant(&s.g, &f)?, &s.g, &s.ct)?;
            let m = check_multiplicities(&spec);
            if m.collision {
                continue;
            }
            done += 1;
            samples += 1;
            if !m.confirmed {
                problems.push(format!("{}: clusters {:?}", s.g.name(), m.clusters));
            }
        }
    }
    Ok(Outcome {
        passed: problems.is_empty(),
        samples,
        metric: None,
        detail: if problems.is_empty() {
            "projection ranks are chi(e)^2 and dense multiplicities match on every sample".into()
        } else {
            problems.join("; ")
        },
    })
}
