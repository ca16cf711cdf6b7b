//! The acceptance suite as data: each criterion runs its experiments and
//! returns named checks plus the measurements behind them, so the same code
//! backs `manin repro` and the integration test.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chars::{
    self, brute_force_counts, cubic_characters, hensel_check, nstar_formula_check,
    sq_identity_check,
};
use crate::constants::{self, euler_product, fit_terms};
use crate::gon;
use crate::linalg::QMatrix;
use crate::picard::{self, classify_dp4, quadric_matrix, segre_symbol, SegreSymbol};
use crate::surfaces::{
    self, builtin, count_ambient, count_surface, HomogeneousForm, Subset, DP4_TYPES,
};
use crate::torsor::{self, verify_bijection, TorsorKind};

/// Seed for every random draw in the suite.
pub const SEED: u64 = 11;
/// Tolerance for the singular integrals.
pub const SIGMA_TOL: f64 = 1e-3;
/// Heights for the leading-term fit.
pub const FIT_HEIGHTS: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];
/// Heights for the `Delta` main term.
pub const DELTA_HEIGHTS: [u64; 3] = [1_000_000, 10_000_000, 100_000_000];
/// Instances per lemma in the bound sweep.
pub const GON_INSTANCES: usize = 1_000;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    /// Everything measured, deterministic for a fixed seed.
    pub measurements: Value,
    pub elapsed_ms: u64,
    pub runtime_limit_s: u64,
}

impl CriterionResult {
    pub fn within_time(&self) -> bool {
        self.elapsed_ms <= self.runtime_limit_s * 1000
    }

    pub fn passed(&self) -> bool {
        self.within_time() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failing_checks(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

struct Builder {
    checks: Vec<Check>,
    measurements: serde_json::Map<String, Value>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            checks: Vec::new(),
            measurements: serde_json::Map::new(),
        }
    }

    fn check(&mut self, name: &'static str, passed: bool) {
        self.checks.push(Check { name, passed });
    }

    fn record(&mut self, key: &str, v: impl Serialize) {
        self.measurements
            .insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }
}

type Outcome = anyhow::Result<Builder>;

fn ambient() -> Outcome {
    let mut b = Builder::new();
    for (n, bound, name) in [(2u32, 1000u64, "P1_density"), (3, 300, "P2_density")] {
        let count = count_ambient(n, bound, surfaces::DEFAULT_BUDGET)?;
        let ratio =
            count as f64 / (surfaces::ambient_leading_constant(n) * (bound as f64).powi(n as i32));
        b.record(
            name,
            json!({ "n": n, "B": bound, "count": count, "ratio": ratio }),
        );
        b.check(name, (0.98..=1.02).contains(&ratio));
    }
    Ok(b)
}

fn d4_bijection() -> Outcome {
    let mut b = Builder::new();
    let spec = builtin("dp3_d4")?;
    let mut rows = Vec::new();
    let mut ok = true;
    for bound in [10, 50, 100] {
        let t = torsor::d4_count(bound);
        let direct = count_surface(&spec, bound, Subset::OpenU, surfaces::DEFAULT_BUDGET)?.count;
        ok &= 2 * t == direct;
        rows.push(json!({ "B": bound, "torsor": t, "direct": direct }));
    }
    b.record("counts", rows);
    b.check("twice_torsor_count", ok);
    let r = verify_bijection(TorsorKind::D4, 100)?;
    b.record(
        "bijection",
        json!({ "matched": r.matched, "missing": r.missing.len(), "extra": r.extra.len() }),
    );
    b.check("bijection_exact", r.is_exact());
    Ok(b)
}

fn a1_bijection() -> Outcome {
    let mut b = Builder::new();
    let r = verify_bijection(TorsorKind::A1, 100)?;
    b.record(
        "bijection",
        json!({ "matched": r.matched, "missing": r.missing.len(), "extra": r.extra.len(), "duplicates": r.duplicates }),
    );
    b.check(
        "differences_on_boundary",
        r.differences_on_boundary() && r.duplicates == 0,
    );
    b.check("image_on_surface", r.image_on_surface);
    Ok(b)
}

/// Coefficients `base * k^3`, so that cube relations occur often.
fn random_coefficients(rng: &mut impl Rng) -> [u64; 4] {
    const BASES: [u64; 8] = [1, 2, 3, 4, 5, 6, 9, 12];
    [0; 4].map(|_| BASES[rng.random_range(0..BASES.len())] * rng.random_range(1..=4u64).pow(3))
}

fn picard_ranks() -> Outcome {
    let mut b = Builder::new();
    let split = picard::picard_rank([1, 1, 1, 1]);
    let twisted: Vec<u32> = [2, 3, 5, 7]
        .iter()
        .map(|&p| picard::picard_rank([1, 1, 1, p]))
        .collect();
    b.record("rank_1111", split);
    b.record("rank_111p", &twisted);
    b.check("rank_1111_is_4", split == 4);
    b.check("rank_111p_is_1", twisted.iter().all(|&r| r == 1));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let tuples: Vec<[u64; 4]> = (0..200).map(|_| random_coefficients(&mut rng)).collect();
    let mut agree = 0;
    let mut rank_one = 0;
    let mut isometric = true;
    for &a in &tuples {
        let r = picard::picard_rank(a);
        rank_one += (r == 1) as u32;
        agree += ((r == 1) == picard::cube_criterion_rank_one(a)) as u32;
        for g in picard::galois_group(a) {
            let m = picard::galois_matrix(&g);
            let basis: Vec<picard::PicClass> = (0..7)
                .map(|i| std::array::from_fn(|j| (i == j) as i64))
                .collect();
            isometric &= basis.iter().all(|u| {
                basis.iter().all(|v| {
                    picard::intersection(&picard::apply(&m, u), &picard::apply(&m, v))
                        == picard::intersection(u, v)
                })
            });
        }
    }
    b.record(
        "random_tuples",
        json!({ "count": tuples.len(), "rank_one": rank_one, "agree": agree }),
    );
    b.check("cube_criterion", agree as usize == tuples.len());
    b.check("galois_isometry", isometric);
    Ok(b)
}

fn form(src: &str) -> anyhow::Result<HomogeneousForm> {
    Ok(HomogeneousForm::parse(5, src)?)
}

/// `P^T A P` for an invertible integer `P` with small entries.
fn random_congruence(rng: &mut impl Rng) -> QMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..5)
            .map(|_| (0..5).map(|_| rng.random_range(-2..=2)).collect())
            .collect();
        let p = QMatrix::from_i64(&rows);
        if p.rank() == 5 {
            return p;
        }
    }
}

fn segre_classification() -> Outcome {
    let mut b = Builder::new();
    let mut table_ok = true;
    let mut invariant = true;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pencils = Vec::new();
    for (ty, q1, q2, symbol, ..) in DP4_TYPES {
        let c = classify_dp4(&form(q1)?, &form(q2)?)?;
        table_ok &= c.symbol.to_string() == symbol && c.table_type.as_deref() == Some(ty);
        pencils.push((
            quadric_matrix(&form(q1)?)?,
            quadric_matrix(&form(q2)?)?,
            symbol.parse::<SegreSymbol>()?,
        ));
    }
    let walk = builtin("dp4_pencil_a1")?;
    let walk_symbol = classify_dp4(&walk.forms[0], &walk.forms[1])?.symbol;
    pencils.push((
        quadric_matrix(&walk.forms[0])?,
        quadric_matrix(&walk.forms[1])?,
        walk_symbol.clone(),
    ));
    for (a, bm, expected) in &pencils {
        for _ in 0..50 {
            let p = random_congruence(&mut rng);
            let pt = p.transpose();
            let s = segre_symbol(&(&(&pt * a) * &p), &(&(&pt * bm) * &p))?;
            invariant &= &s == expected;
        }
    }
    b.record("table_rows", DP4_TYPES.len());
    b.record("walk_symbol", walk_symbol.to_string());
    b.record("transforms_per_pencil", 50);
    b.check("table_types", table_ok);
    b.check("walk_pair", walk_symbol.to_string() == "(2,1,1,1)");
    b.check("congruence_invariance", invariant);
    Ok(b)
}

fn local_identities() -> Outcome {
    let mut b = Builder::new();
    let fermat = [1, 1, 1, 1];
    let mut nstar = Vec::new();
    let mut ok = true;
    for p in [7, 13, 31] {
        let (lhs, rhs) = nstar_formula_check(fermat, p)?;
        ok &= lhs == rhs;
        nstar.push(json!({ "p": p, "Nstar": lhs, "formula": rhs }));
    }
    let brute7 = brute_force_counts(fermat, 7).n_star;
    b.record("nstar", nstar);
    b.record("nstar_7_brute", brute7);
    b.check("nstar_formula", ok && brute7 == 594);

    let d5 = chars::delta_p(fermat, 5)?;
    b.record("delta_5", d5);
    b.check("delta_5_zero", d5 == 0);

    let mut jacobi_ok = true;
    let mut tuples = 0;
    for p in [7, 13] {
        let (chi, bar) = cubic_characters(p)?;
        for r in 2..=4u32 {
            for mask in 0..(1u32 << r) {
                let cs: Vec<_> = (0..r)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            bar.clone()
                        } else {
                            chi.clone()
                        }
                    })
                    .collect();
                jacobi_ok &= chars::jacobi_sum(&cs)?.norm() == chars::jacobi_norm_expected(&cs);
                tuples += 1;
            }
        }
    }
    b.record("jacobi_tuples", tuples);
    b.check("jacobi_magnitudes", jacobi_ok);

    let mut worst = 0.0f64;
    for p in [2, 3, 5, 7] {
        for e in 1..=2 {
            worst = worst.max(sq_identity_check(fermat, p, e)?.rel_err);
        }
    }
    b.record("sq_worst_rel_err", worst);
    b.check("sq_identity", worst <= 1e-6);

    let mut hensel = true;
    for p in [5, 7, 13] {
        hensel &= hensel_check(fermat, p, 2)?.holds;
    }
    b.check("hensel", hensel);
    Ok(b)
}

fn constants_check() -> Outcome {
    let mut b = Builder::new();
    for (name, s) in [
        ("sigma_a1", constants::sigma_infty_a1(SIGMA_TOL)?),
        ("sigma_fermat", constants::sigma_infty_fermat(SIGMA_TOL)?),
    ] {
        b.record(
            name,
            json!({ "primary": s.primary.value, "check": s.check.value }),
        );
        b.check(name, s.discrepancy() <= 3.0 * SIGMA_TOL * s.value.max(1.0));
    }
    let mut stable = true;
    for e in [constants::e2_product(), constants::g4_product()] {
        let lo = euler_product(&e, 10_000)?.value;
        let hi = euler_product(&e, 100_000)?.value;
        stable &= (lo - hi).abs() / hi.abs() <= 1e-4;
        b.record(e.name, json!({ "P=1e4": lo, "P=1e5": hi }));
    }
    b.check("euler_stable", stable);
    let (series, _) = constants::l1_lambda_series(1_000_000);
    b.record(
        "L1",
        json!({ "closed": constants::l1_lambda(), "series": series }),
    );
    b.check("L1_series", (series - constants::l1_lambda()).abs() <= 1e-4);
    Ok(b)
}

fn leading_term() -> Outcome {
    let mut b = Builder::new();
    let c1 = constants::c1_a1()?.value;
    let pts: Vec<(f64, f64)> = FIT_HEIGHTS
        .iter()
        .map(|&h| (h as f64, 2.0 * torsor::a1_count(h) as f64))
        .collect();
    let ratios: Vec<f64> = pts
        .iter()
        .map(|&(h, n)| n / (c1 * h * h.ln().powi(3)))
        .collect();
    let fit = fit_terms(&pts, &[3, 2])?;
    b.record("c1", c1);
    b.record("N_U", pts.iter().map(|p| p.1).collect::<Vec<_>>());
    b.record("ratios", &ratios);
    b.record("fit", &fit);
    let rel = fit.leading() / c1;
    b.record("fit_over_c1", rel);
    b.check("fit_band", (0.5..=2.0).contains(&rel));
    b.check(
        "ratio_trend",
        ratios
            .windows(2)
            .all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs()),
    );
    Ok(b)
}

fn delta_main_term() -> Outcome {
    let mut b = Builder::new();
    let e2 = constants::e2_zero(constants::DEFAULT_PRIME_BOUND)?.value;
    let ratios: Vec<f64> = DELTA_HEIGHTS
        .iter()
        .map(|&x| constants::delta_main_term_ratio(x, e2))
        .collect();
    b.record("E2", e2);
    b.record("ratios", &ratios);
    b.check("ratio_band", ratios.iter().all(|r| (0.4..=2.5).contains(r)));
    b.check(
        "ratio_trend",
        (ratios[2] - 1.0).abs() < (ratios[0] - 1.0).abs(),
    );
    b.check(
        "ap_identity",
        [2, 3, 5]
            .iter()
            .all(|&p| constants::ap_identity_holds(p, 12)),
    );
    Ok(b)
}

fn lemma_bounds() -> Outcome {
    let mut b = Builder::new();
    let line = gon::check_line_bound(&gon::sample(GON_INSTANCES, SEED, gon::random_line_instance))?;
    let conic = gon::check_conic_bound(&gon::sample(
        GON_INSTANCES,
        SEED,
        gon::random_conic_instance,
    ))?;
    let rho = gon::check_rho(&gon::sample(GON_INSTANCES, SEED, gon::random_rho_instance));
    for r in [line, conic, rho] {
        b.check(
            match r.lemma.as_str() {
                "line" => "line_bound",
                "conic" => "conic_bound",
                _ => "rho_bound",
            },
            r.violations == 0,
        );
        b.record(&r.lemma, &r);
    }
    Ok(b)
}

type Runner = fn() -> Outcome;

/// Criteria 1 to 10 with their runtime limits in seconds.
const CRITERIA: [(u8, &str, u64, Runner); 10] = [
    (1, "ambient density", 20, ambient),
    (2, "D4 torsor bijection", 300, d4_bijection),
    (3, "A1 torsor consistency", 300, a1_bijection),
    (4, "Picard ranks", 60, picard_ranks),
    (5, "Segre classification", 60, segre_classification),
    (6, "local identities", 600, local_identities),
    (7, "constants", 300, constants_check),
    (8, "A1 leading term", 1800, leading_term),
    (9, "Delta main term", 600, delta_main_term),
    (10, "lemma bounds", 300, lemma_bounds),
];

/// Ids and titles of criteria 1 to 10.
pub fn criteria() -> impl Iterator<Item = (u8, &'static str)> {
    CRITERIA.iter().map(|c| (c.0, c.1))
}

pub fn run_criterion(id: u8) -> anyhow::Result<CriterionResult> {
    let &(id, title, limit, run) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| anyhow::anyhow!("no criterion {id}"))?;
    let start = Instant::now();
    let out = run()?;
    Ok(CriterionResult {
        id,
        title,
        checks: out.checks,
        measurements: Value::Object(out.measurements),
        elapsed_ms: start.elapsed().as_millis() as u64,
        runtime_limit_s: limit,
    })
}

/// Run criteria 1 to 10 on a pool of `workers` threads.
pub fn run_all(workers: usize) -> anyhow::Result<Vec<CriterionResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()?;
    pool.install(|| CRITERIA.iter().map(|c| run_criterion(c.0)).collect())
}

/// Criterion 11: the measurements and verdicts of two runs coincide.
/// `elapsed_ms` is left for the caller, who timed the second run.
pub fn determinism(a: &[CriterionResult], b: &[CriterionResult]) -> CriterionResult {
    let same = a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.id == y.id
                && x.measurements == y.measurements
                && x.checks
                    .iter()
                    .map(|c| c.passed)
                    .eq(y.checks.iter().map(|c| c.passed))
        });
    let differing: Vec<u8> = a
        .iter()
        .zip(b)
        .filter(|(x, y)| x.measurements != y.measurements)
        .map(|(x, _)| x.id)
        .collect();
    CriterionResult {
        id: 11,
        title: "determinism across worker counts",
        checks: vec![Check {
            name: "identical_results",
            passed: same,
        }],
        measurements: json!({ "differing_criteria": differing }),
        elapsed_ms: 0,
        runtime_limit_s: u64::MAX / 1000,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Suite {
    pub workers: usize,
    pub criteria: Vec<CriterionResult>,
}

/// The full suite: criteria 1 to 10 at `workers` threads, then again on one
/// thread (or eight, if `workers` is 1) for criterion 11.
pub fn run_suite(workers: usize) -> anyhow::Result<Suite> {
    let mut main = run_all(workers)?;
    let start = Instant::now();
    let other = run_all(if workers == 1 { 8 } else { 1 })?;
    let mut det = determinism(&main, &other);
    det.elapsed_ms = start.elapsed().as_millis() as u64;
    main.push(det);
    Ok(Suite {
        workers,
        criteria: main,
    })
}

/// One line per criterion.
pub fn summary_line(c: &CriterionResult) -> String {
    let verdict = if c.passed() { "PASS" } else { "FAIL" };
    let mut line = format!(
        "{verdict} {:>2} {:<34} {:>9.1}s",
        c.id,
        c.title,
        c.elapsed_ms as f64 / 1000.0
    );
    let failing = c.failing_checks();
    if !failing.is_empty() {
        line += &format!("  failing: {}", failing.join(", "));
    }
    if !c.within_time() {
        line += &format!("  over the {}s limit", c.runtime_limit_s);
    }
    line
}
