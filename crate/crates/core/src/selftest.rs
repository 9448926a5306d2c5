//! Acceptance checks, shared by `orbitvol selftest` and the `acceptance`
//! integration test. Every check is exact unless it says otherwise, and the
//! whole run is deterministic for a given seed.

use std::fmt;

use itertools::Itertools;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dhfun::DhProblem;
use crate::exact::{format_rational, q, qf, Q};
use crate::mcreduce::{su2_check_with, su2_point_count, TriangleInstance};
use crate::polyvol::{exact_volume, monte_carlo_volume, Fiber, FiberPolytope};
use crate::reducedvol::{calibration, ReducedVolume};
use crate::rootsystem::{build_root_system, su3_lm_to_simple, GroupType, RootSystem, Series, Weight};
use crate::su3::{self, SU3Weights};
use crate::weylgroup::{expected_order, WeylGroup};

pub const MC_SAMPLES: u64 = 1_000_000;
pub const MC_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct SelfTestOptions {
    pub seed: u64,
    pub mc_samples: u64,
    /// Flip the sign of one Weyl element in every generated group.
    pub corrupt_weyl_sign: bool,
}

impl Default for SelfTestOptions {
    fn default() -> Self {
        Self {
            seed: 20260214,
            mc_samples: MC_SAMPLES,
            corrupt_weyl_sign: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    OutOfScope,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::OutOfScope => "N/A",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl Outcome {
    fn new(id: u8, name: &'static str, failures: Vec<String>, summary: String) -> Self {
        let (status, detail) = if failures.is_empty() {
            (Status::Pass, summary)
        } else {
            let shown = failures.iter().take(3).join("; ");
            (
                Status::Fail,
                format!("{summary}; {} failure(s): {shown}", failures.len()),
            )
        };
        Self {
            id,
            name,
            status,
            detail,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "criterion {:>2} {:<4} {}: {}", self.id, self.status, self.name, self.detail)
    }
}

struct Ctx<'a> {
    opts: &'a SelfTestOptions,
}

impl Ctx<'_> {
    fn rng(&self, criterion: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.opts.seed.wrapping_mul(31).wrapping_add(criterion))
    }

    fn rs(&self, series: Series, rank: usize) -> RootSystem {
        build_root_system(series, rank).expect("supported root system")
    }

    fn weyl(&self, rs: &RootSystem) -> WeylGroup {
        let w = WeylGroup::generate(rs).expect("small Weyl group");
        if self.opts.corrupt_weyl_sign {
            let victim = (0..w.order())
                .find(|&i| i != w.identity_index())
                .expect("nontrivial group");
            w.with_corrupted_sign(victim)
        } else {
            w
        }
    }

    fn engine(&self, rs: &RootSystem, n: usize) -> ReducedVolume {
        ReducedVolume::with_weyl(rs, self.weyl(rs), n).expect("valid engine")
    }
}

fn random_rational(rng: &mut impl Rng, lo: i64, hi: i64, max_den: i64) -> Q {
    let den = rng.gen_range(1..=max_den);
    qf(rng.gen_range(lo * den..=hi * den), den)
}

/// `l > m > 0` with `l` in `[1, 20]` and small denominators.
fn random_regular_lm(rng: &mut impl Rng) -> (Q, Q) {
    let den = rng.gen_range(1..=4i64);
    let l_num = rng.gen_range((2.max(den))..=20 * den);
    let m_num = rng.gen_range(1..l_num);
    (qf(l_num, den), qf(m_num, den))
}

/// Regular dominant weight with small positive fundamental coordinates,
/// moved by a random Weyl element.
fn random_regular_weight(rng: &mut impl Rng, rs: &RootSystem, weyl: &WeylGroup) -> Weight {
    let fw: Vec<Q> = (0..rs.rank).map(|_| random_rational(rng, 1, 4, 2)).collect();
    let dominant = rs.fundamental_to_simple(&fw).expect("rank matches");
    let w = weyl.elements.choose(rng).expect("nonempty group");
    w.act(&dominant).expect("rank matches")
}

fn su3_weights_to_simple(w: &SU3Weights) -> Vec<Weight> {
    (0..3).map(|i| su3_lm_to_simple(&w.l[i], &w.m[i])).collect()
}

pub fn criterion_1(opts: &SelfTestOptions) -> Outcome {
    let ctx = Ctx { opts };
    let mut rng = ctx.rng(1);
    let rs = ctx.rs(Series::A, 2);
    let engine = ctx.engine(&rs, 3);
    let mut failures = Vec::new();
    let mut nonzero = 0;
    const INPUTS: usize = 100;
    for _ in 0..INPUTS {
        let pairs: Vec<(Q, Q)> = (0..3).map(|_| random_regular_lm(&mut rng)).collect();
        let w = SU3Weights::new(
            [pairs[0].0.clone(), pairs[1].0.clone(), pairs[2].0.clone()],
            [pairs[0].1.clone(), pairs[1].1.clone(), pairs[2].1.clone()],
        );
        let engine_value = match engine.signed_sum_volume(&su3_weights_to_simple(&w)) {
            Ok(r) => r.value,
            Err(e) => {
                failures.push(format!("{w}: {e}"));
                continue;
            }
        };
        let jj = su3::jj_volume(&w).value;
        if !jj.is_zero() {
            nonzero += 1;
        }
        if engine_value != jj {
            failures.push(format!(
                "{w}: signed sum {} != closed form {}",
                format_rational(&engine_value),
                format_rational(&jj)
            ));
        }
    }
    Outcome::new(
        1,
        "SU(3) triple-product equivalence",
        failures,
        format!("{INPUTS} regular rational inputs, {nonzero} with nonzero volume"),
    )
}

pub fn criterion_2(opts: &SelfTestOptions) -> Outcome {
    let ctx = Ctx { opts };
    let mut rng = ctx.rng(2);
    const WANTED: usize = 50;
    const MAX_DRAWS: usize = 20_000;
    let mut ratios: Vec<(SU3Weights, Q)> = Vec::new();
    let mut excluded_boundary = 0;
    let mut zero_pairs = 0;
    let mut failures = Vec::new();
    let mut draws = 0;
    while ratios.len() < WANTED && draws < MAX_DRAWS {
        draws += 1;
        let mut l = [0i64; 3];
        let mut m = [0i64; 3];
        for i in 0..3 {
            l[i] = rng.gen_range(2..=20);
            m[i] = rng.gen_range(1..l[i]);
        }
        if (l.iter().sum::<i64>() + m.iter().sum::<i64>()) % 3 != 0 {
            continue;
        }
        let w = SU3Weights::from_ints(l, m);
        let st = match su3::st_volume(&w) {
            Ok(st) => st,
            Err(e) => {
                failures.push(format!("{w}: {e}"));
                continue;
            }
        };
        if st.boundary_terms > 0 {
            excluded_boundary += 1;
            continue;
        }
        let jj = su3::jj_volume(&w).value;
        if jj.is_zero() {
            zero_pairs += 1;
            if !st.value.is_zero() {
                failures.push(format!("{w}: closed form 0 but ST {}", format_rational(&st.value)));
            }
            continue;
        }
        ratios.push((w, st.value / jj));
    }
    if ratios.len() < WANTED {
        failures.push(format!("only {} usable inputs after {draws} draws", ratios.len()));
    }
    let constant = ratios.first().map(|(_, r)| r.clone());
    if let Some(c) = &constant {
        for (w, r) in &ratios {
            if r != c {
                failures.push(format!("{w}: ratio {} != {}", format_rational(r), format_rational(c)));
            }
        }
        let cal = calibration(GroupType::new(Series::A, 2), 3);
        if cal.constant() != Some(c) {
            failures.push("ratio differs from the stored A2 calibration".to_string());
        }
    }
    Outcome::new(
        2,
        "closed form vs 6-partition formula",
        failures,
        format!(
            "{} inputs with ratio {}, {zero_pairs} with both zero, {excluded_boundary} excluded on ST equality boundaries",
            ratios.len(),
            constant.as_ref().map_or("-".to_string(), format_rational)
        ),
    )
}

fn grid(values: &[Q], n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|_| values.iter().cloned())
        .multi_cartesian_product()
        .collect()
}

pub fn criterion_3(opts: &SelfTestOptions) -> Outcome {
    let ctx = Ctx { opts };
    let mut rng = ctx.rng(3);
    let mut failures = Vec::new();
    let mut checked = Vec::new();

    let a1 = ctx.rs(Series::A, 1);
    for (n, values) in [
        (3usize, (1..=6).map(|k| qf(k, 2)).collect::<Vec<_>>()),
        (4, vec![qf(1, 2), q(1), qf(5, 3), qf(5, 2)]),
        (5, vec![qf(1, 3), q(1), qf(7, 4)]),
    ] {
        let engine = ctx.engine(&a1, n);
        let points = grid(&values, n);
        for p in &points {
            let xis: Vec<Weight> = p.iter().map(|c| Weight::new(vec![c.clone()])).collect();
            compare_paths(&engine, &xis, &mut failures);
        }
        checked.push(format!("A1 N={n}: {} grid points", points.len()));
    }

    let a2 = ctx.rs(Series::A, 2);
    for n in [3usize, 4] {
        let engine = ctx.engine(&a2, n);
        const DRAWS: usize = 50;
        for _ in 0..DRAWS {
            let xis: Vec<Weight> = (0..n)
                .map(|_| random_regular_weight(&mut rng, &a2, engine.weyl()))
                .collect();
            compare_paths(&engine, &xis, &mut failures);
        }
        checked.push(format!("A2 N={n}: {DRAWS} random draws"));
    }
    Outcome::new(3, "naive sum equals factored sum", failures, checked.join(", "))
}

fn compare_paths(engine: &ReducedVolume, xis: &[Weight], failures: &mut Vec<String>) {
    let label = || xis.iter().map(ToString::to_string).join(" ");
    match (engine.signed_sum_volume(xis), engine.factored_signed_sum_volume(xis)) {
        (Ok(a), Ok(b)) if a.value == b.value => {}
        (Ok(a), Ok(b)) => failures.push(format!(
            "{}: naive {} != factored {}",
            label(),
            format_rational(&a.value),
            format_rational(&b.value)
        )),
        (Err(e), _) | (_, Err(e)) => failures.push(format!("{}: {e}", label())),
    }
}

pub fn criterion_4(opts: &SelfTestOptions) -> Outcome {
    let ctx = Ctx { opts };
    let a1 = ctx.rs(Series::A, 1);
    let engine = ctx.engine(&a1, 3);
    let mut failures = Vec::new();
    let ones = TriangleInstance::new([q(1), q(1), q(1)]).unwrap();
    match su2_check_with(&engine, &ones) {
        Ok(r) if r.raw == q(-2) => {}
        Ok(r) => failures.push(format!("raw value at (1,1,1) is {}", format_rational(&r.raw))),
        Err(e) => failures.push(e.to_string()),
    }
    let values: Vec<Q> = (1..=12).map(|k| qf(k, 3)).collect();
    let mut checked = 0;
    let mut closing = 0;
    for p in grid(&values, 3) {
        let t = TriangleInstance::new([p[0].clone(), p[1].clone(), p[2].clone()]).unwrap();
        if su2_point_count(&t).boundary {
            continue;
        }
        checked += 1;
        match su2_check_with(&engine, &t) {
            Ok(r) => {
                closing += usize::from(r.count.count);
                if r.pass != Some(true) {
                    failures.push(format!(
                        "({}): calibrated {} vs count {}",
                        p.iter().map(format_rational).join(","),
                        format_rational(&r.calibrated),
                        r.count.count
                    ));
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    if checked < 500 {
        failures.push(format!("only {checked} non-degenerate triples"));
    }
    Outcome::new(
        4,
        "A1 triangle ground truth",
        failures,
        format!("raw(1,1,1) = -2, {checked} non-degenerate triples ({closing} closing), calibration -1/2"),
    )
}

pub fn criterion_5(opts: &SelfTestOptions) -> Outcome {
    let ctx = Ctx { opts };
    let a2 = ctx.rs(Series::A, 2);
    let dh = DhProblem::new(&a2, 1).expect("A2 DH problem");
    let values: Vec<Q> = (-16..=16).map(|k| qf(k, 4)).collect();
    let mut failures = Vec::new();
    let mut count = 0;
    let mut zero = 0;
    for l in &values {
        for m in &values {
            count += 1;
            let expected = su3::h_closed_form(l, m);
            zero += usize::from(expected.is_zero());
            match dh.dh_density(&su3_lm_to_simple(l, m)) {
                Ok(v) if v.value == expected => {}
                Ok(v) => failures.push(format!(
                    "(l,m)=({},{}): {} != {}",
                    format_rational(l),
                    format_rational(m),
                    format_rational(&v.value),
                    format_rational(&expected)
                )),
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    Outcome::new(
        5,
        "DH closed form for A2",
        failures,
        format!("{count} (l,m) pairs on a 1/4 grid over [-4,4]^2, {zero} with zero density"),
    )
}

pub fn criterion_6(opts: &SelfTestOptions) -> Outcome {
    let ctx = Ctx { opts };
    let mut failures = Vec::new();
    let mut compared = 0;
    let mut lines = Vec::new();

    let exact_cases = [
        ("unit 3-simplex", FiberPolytope::unit_simplex(3), qf(1, 6)),
        ("unit square", FiberPolytope::unit_cube(2), q(1)),
    ];
    let mut polytopes: Vec<(String, FiberPolytope)> = Vec::new();
    for (name, p, expected) in exact_cases {
        match exact_volume(&p) {
            Ok(v) if v.value == expected => {}
            Ok(v) => failures.push(format!("{name}: exact {}", format_rational(&v.value))),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
        polytopes.push((name.to_string(), p));
    }

    let a2 = ctx.rs(Series::A, 2);
    let a1 = ctx.rs(Series::A, 1);
    let fibers: Vec<(&RootSystem, usize, Vec<Q>)> = vec![
        (&a2, 1, vec![q(1), q(1)]),
        (&a2, 1, vec![q(2), qf(1, 2)]),
        (&a2, 1, vec![qf(3, 2), qf(5, 2)]),
        (&a2, 2, vec![q(1), q(1)]),
        (&a2, 2, vec![q(2), q(1)]),
        (&a2, 2, vec![qf(1, 2), qf(3, 2)]),
        (&a1, 2, vec![q(1)]),
        (&a1, 2, vec![qf(5, 2)]),
        (&a1, 3, vec![q(1)]),
        (&a1, 3, vec![q(2)]),
    ];
    for (rs, m, xi) in fibers {
        let dh = DhProblem::new(rs, m).expect("DH problem");
        let label = format!("{}{} M={m} xi={}", rs.series, rs.rank, Weight::new(xi.clone()));
        match dh.fiber(&Weight::new(xi)) {
            Ok(Fiber::Feasible(p)) => polytopes.push((label, p)),
            Ok(Fiber::Infeasible) => failures.push(format!("{label}: infeasible")),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }

    // free_dim = 0 has no Monte Carlo; compare against the feasibility indicator.
    let point_dh = DhProblem::new(&a1, 1).expect("DH problem");
    for x in [2i64, -1] {
        let v = point_dh.dh_density(&Weight::from_ints(&[x])).expect("A1 density");
        if v.value != q(i64::from(x >= 0)) {
            failures.push(format!("A1 M=1 xi=({x}): {}", format_rational(&v.value)));
        }
    }

    for (k, (label, p)) in polytopes.iter().enumerate() {
        let exact = match exact_volume(p) {
            Ok(v) => v.value,
            Err(e) => {
                failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        let seed = opts.seed.wrapping_add(k as u64);
        match monte_carlo_volume(p, opts.mc_samples, seed) {
            Ok(est) => {
                compared += 1;
                let exact_f = crate::exact::to_f64(&exact);
                let err = (est.value - exact_f).abs();
                let bound = MC_SIGMAS * est.std_error + 1e-12;
                lines.push(format!("{label}: {}", format_rational(&exact)));
                if err > bound {
                    failures.push(format!(
                        "{label}: exact {} vs MC {:.6} +- {:.6}",
                        format_rational(&exact),
                        est.value,
                        est.std_error
                    ));
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    if compared < 12 {
        failures.push(format!("only {compared} polytopes compared"));
    }
    Outcome::new(
        6,
        "exact polytope volume vs Monte Carlo",
        failures,
        format!(
            "{compared} polytopes within {MC_SIGMAS} sigma at {} samples",
            opts.mc_samples
        ),
    )
}

/// `(x + s x) / 2` for a reflection `s`: a weight fixed by `s`.
fn wall_weight(x: &Weight, s: &crate::weylgroup::WeylElement) -> Weight {
    (&s.act_unchecked(x) + x).scale(&qf(1, 2))
}

pub fn criterion_7(opts: &SelfTestOptions) -> Outcome {
    let ctx = Ctx { opts };
    let mut rng = ctx.rng(7);
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    const INSTANCES: usize = 20;
    for (series, rank, n) in [(Series::A, 1, 4usize), (Series::A, 2, 3), (Series::B, 2, 3)] {
        let rs = ctx.rs(series, rank);
        let engine = ctx.engine(&rs, n);
        let a = engine.free_dim() as i32;
        let group = format!("{series}{rank} N={n}");
        let mut nonzero = 0;
        for _ in 0..INSTANCES {
            let xis: Vec<Weight> = (0..n)
                .map(|_| random_regular_weight(&mut rng, &rs, engine.weyl()))
                .collect();
            let value = |ws: &[Weight]| engine.factored_signed_sum_volume(ws).map(|r| r.value);
            let base = match value(&xis) {
                Ok(v) => v,
                Err(e) => {
                    failures.push(format!("{group}: {e}"));
                    continue;
                }
            };
            nonzero += usize::from(!base.is_zero());

            let j = rng.gen_range(0..n);
            let w = engine.weyl().elements.choose(&mut rng).unwrap().clone();
            let mut moved = xis.clone();
            moved[j] = w.act_unchecked(&xis[j]);
            if value(&moved).ok() != Some(q(i64::from(w.sign)) * &base) {
                failures.push(format!("{group}: anti-equivariance at orbit {}", j + 1));
            }

            let mut shuffled = xis.clone();
            shuffled.shuffle(&mut rng);
            if value(&shuffled).ok().as_ref() != Some(&base) {
                failures.push(format!("{group}: permutation invariance"));
            }

            let t = qf(rng.gen_range(1..=7), rng.gen_range(1..=5));
            let scaled: Vec<Weight> = xis.iter().map(|x| x.scale(&t)).collect();
            let factor = num_traits::pow::pow(t.clone(), a as usize);
            if value(&scaled).ok() != Some(&base * factor) {
                failures.push(format!("{group}: homogeneity with t = {}", format_rational(&t)));
            }

            let s = engine.weyl().simple_reflections.choose(&mut rng).unwrap();
            let mut walled = xis.clone();
            walled[j] = wall_weight(&xis[j], s);
            if value(&walled).ok() != Some(Q::zero()) {
                failures.push(format!("{group}: wall vanishing at orbit {}", j + 1));
            }
        }
        summary.push(format!("{group}: {INSTANCES} instances ({nonzero} nonzero), degree {a}"));
    }
    Outcome::new(7, "invariant suite", failures, summary.join(", "))
}

pub fn criterion_8(opts: &SelfTestOptions) -> Outcome {
    let ctx = Ctx { opts };
    let mut failures = Vec::new();
    let mut orders = Vec::new();
    for (series, rank, expected) in [
        (Series::A, 1, 2usize),
        (Series::A, 2, 6),
        (Series::A, 3, 24),
        (Series::B, 2, 8),
        (Series::G, 2, 12),
    ] {
        let rs = ctx.rs(series, rank);
        let w = ctx.weyl(&rs);
        orders.push(format!("{series}{rank}:{}", w.order()));
        if w.order() != expected || expected_order(&rs) != expected {
            failures.push(format!("{series}{rank}: order {} != {expected}", w.order()));
        }
        if w.order() > 24 {
            continue;
        }
        let Some(table) = w.multiplication_table() else {
            failures.push(format!("{series}{rank}: not closed"));
            continue;
        };
        let mut bad = 0;
        for (i, row) in table.iter().enumerate() {
            for (j, &k) in row.iter().enumerate() {
                if w.elements[k].sign != w.elements[i].sign * w.elements[j].sign {
                    bad += 1;
                }
            }
        }
        for e in &w.elements {
            if i64::from(e.sign) != e.determinant() {
                bad += 1;
            }
        }
        if bad > 0 {
            failures.push(format!("{series}{rank}: {bad} sign violations"));
        }
    }
    Outcome::new(
        8,
        "Weyl group orders and signs",
        failures,
        format!("orders {}, sign homomorphism checked exhaustively", orders.join(" ")),
    )
}

pub fn criterion_9(_opts: &SelfTestOptions) -> Outcome {
    Outcome {
        id: 9,
        name: "absolute normalization",
        status: Status::OutOfScope,
        detail: "out of claim; raw sums use the pushforward-density convention, calibrated only for A1 N=3 and A2 N=3"
            .to_string(),
    }
}

pub type Criterion = fn(&SelfTestOptions) -> Outcome;

pub const CRITERIA: [Criterion; 9] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
];

pub fn run_all(opts: &SelfTestOptions) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| c(opts)).collect()
}

pub fn render(outcomes: &[Outcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&o.to_string());
        out.push('\n');
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    out.push_str(&format!(
        "{} of {} criteria failed\n",
        failed,
        outcomes.len()
    ));
    out
}
