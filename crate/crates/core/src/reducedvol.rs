//! Volumes of N-fold reduced products as signed sums over `W^N`:
//!
//! `SVol = sum_{w in W^N} sgn(w) H_{(N-2)·beta}(sum_j w_j xi_j)`.
//!
//! Values are raw sums in the pushforward-density convention; see
//! [`calibration`] for the constants that relate them to geometric volumes
//! where those are known.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dhfun::{ConePosition, DhError, DhProblem};
use crate::exact::{self, q, Q};
use crate::lp;
use crate::rootsystem::{GroupType, RootSystem, RootSystemError, Series, Weight};
use crate::su3::{self, SU3Weights};
use crate::weylgroup::{WeylElement, WeylError, WeylGroup};

pub const DEFAULT_TERM_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReducedVolError {
    #[error("at least 3 orbits are required, got {0}")]
    TooFewOrbits(usize),
    #[error("expected {expected} weights, got {actual}")]
    WrongOrbitCount { expected: usize, actual: usize },
    #[error(transparent)]
    Dimension(#[from] RootSystemError),
    #[error("{terms} terms exceed the cap of {cap}")]
    TermCapExceeded { terms: u64, cap: u64 },
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Dh(#[from] DhError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Naive,
    Factored,
    Su3Jj,
    Su3St,
    MonteCarlo,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Factored => "factored",
            Method::Su3Jj => "su3-jj",
            Method::Su3St => "su3-st",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(Method::Naive),
            "factored" => Ok(Method::Factored),
            "su3-jj" => Ok(Method::Su3Jj),
            "su3-st" => Ok(Method::Su3St),
            "monte-carlo" => Ok(Method::MonteCarlo),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeResult {
    pub value: Q,
    pub method: Method,
    pub terms_evaluated: u64,
    pub warnings: Vec<String>,
}

/// A list of `N >= 3` weights of one root system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTuple {
    pub rs: RootSystem,
    pub xis: Vec<Weight>,
}

impl OrbitTuple {
    pub fn new(rs: RootSystem, xis: Vec<Weight>) -> Result<Self, ReducedVolError> {
        if xis.len() < 3 {
            return Err(ReducedVolError::TooFewOrbits(xis.len()));
        }
        if let Some(bad) = xis.iter().find(|x| x.dim() != rs.rank) {
            return Err(RootSystemError::DimensionMismatch {
                expected: rs.rank,
                actual: bad.dim(),
            }
            .into());
        }
        Ok(Self { rs, xis })
    }

    pub fn n(&self) -> usize {
        self.xis.len()
    }
}

/// `sum_j w_j xi_j`.
pub fn moment_image(ws: &[&WeylElement], xis: &[Weight]) -> Result<Weight, ReducedVolError> {
    if ws.len() != xis.len() {
        return Err(ReducedVolError::WrongOrbitCount {
            expected: ws.len(),
            actual: xis.len(),
        });
    }
    let dim = xis.first().map_or(0, Weight::dim);
    let mut acc = Weight::zero(dim);
    for (w, xi) in ws.iter().zip(xis) {
        acc = &acc + &w.act(xi)?;
    }
    Ok(acc)
}

/// Signed-sum evaluator for a fixed root system and orbit count.
#[derive(Debug)]
pub struct ReducedVolume {
    rs: RootSystem,
    weyl: WeylGroup,
    n: usize,
    dh: DhProblem,
    cap_terms: u64,
}

struct TermTotals {
    value: Q,
    walls: u64,
}

impl TermTotals {
    fn zero() -> Self {
        Self {
            value: Q::zero(),
            walls: 0,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.value += other.value;
        self.walls += other.walls;
        self
    }
}

impl ReducedVolume {
    pub fn new(rs: &RootSystem, n: usize) -> Result<Self, ReducedVolError> {
        let weyl = WeylGroup::generate(rs)?;
        Self::with_weyl(rs, weyl, n)
    }

    /// Uses a caller-supplied group (e.g. a deliberately corrupted one).
    pub fn with_weyl(rs: &RootSystem, weyl: WeylGroup, n: usize) -> Result<Self, ReducedVolError> {
        if n < 3 {
            return Err(ReducedVolError::TooFewOrbits(n));
        }
        Ok(Self {
            rs: rs.clone(),
            weyl,
            n,
            dh: DhProblem::new(rs, n - 2)?,
            cap_terms: DEFAULT_TERM_CAP,
        })
    }

    pub fn with_cap(mut self, cap_terms: u64) -> Self {
        self.cap_terms = cap_terms;
        self
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn dh(&self) -> &DhProblem {
        &self.dh
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree of homogeneity `a = (N - 2) r - rank`.
    pub fn free_dim(&self) -> usize {
        self.dh.free_dim()
    }

    fn check(&self, xis: &[Weight]) -> Result<(), ReducedVolError> {
        if xis.len() != self.n {
            return Err(ReducedVolError::WrongOrbitCount {
                expected: self.n,
                actual: xis.len(),
            });
        }
        if let Some(bad) = xis.iter().find(|x| x.dim() != self.rs.rank) {
            return Err(RootSystemError::DimensionMismatch {
                expected: self.rs.rank,
                actual: bad.dim(),
            }
            .into());
        }
        Ok(())
    }

    fn term_count(&self, factors: usize) -> Result<u64, ReducedVolError> {
        let order = self.weyl.order() as u64;
        let terms = (0..factors).try_fold(1u64, |acc, _| acc.checked_mul(order));
        match terms {
            Some(t) if t <= self.cap_terms => Ok(t),
            Some(t) => Err(ReducedVolError::TermCapExceeded {
                terms: t,
                cap: self.cap_terms,
            }),
            None => Err(ReducedVolError::TermCapExceeded {
                terms: u64::MAX,
                cap: self.cap_terms,
            }),
        }
    }

    /// `images[j][k] = w_k · xi_j`.
    fn orbit_images(&self, xis: &[Weight]) -> Vec<Vec<Weight>> {
        xis.iter()
            .map(|xi| self.weyl.iter().map(|w| w.act_unchecked(xi)).collect())
            .collect()
    }

    fn irregular_warnings(&self, xis: &[Weight]) -> Vec<String> {
        xis.iter()
            .enumerate()
            .filter(|(_, xi)| !self.rs.is_regular(xi))
            .map(|(j, xi)| format!("weight {} = {xi} is not regular; the sum vanishes", j + 1))
            .collect()
    }

    fn finish(
        &self,
        totals: TermTotals,
        method: Method,
        terms: u64,
        xis: &[Weight],
    ) -> VolumeResult {
        let mut warnings = self.irregular_warnings(xis);
        if totals.walls > 0 {
            warnings.push(format!(
                "{} DH arguments lie on walls of the support cone",
                totals.walls
            ));
        }
        VolumeResult {
            value: totals.value,
            method,
            terms_evaluated: terms,
            warnings,
        }
    }

    fn decode(&self, mut index: u64, len: usize) -> Vec<usize> {
        let order = self.weyl.order() as u64;
        (0..len)
            .map(|_| {
                let k = (index % order) as usize;
                index /= order;
                k
            })
            .collect()
    }

    /// Direct sum over all `|W|^N` tuples.
    pub fn signed_sum_volume(&self, xis: &[Weight]) -> Result<VolumeResult, ReducedVolError> {
        self.check(xis)?;
        let terms = self.term_count(self.n)?;
        let images = self.orbit_images(xis);
        let totals = (0..terms)
            .into_par_iter()
            .map(|idx| -> Result<TermTotals, DhError> {
                let tuple = self.decode(idx, self.n);
                let mut arg = Weight::zero(self.rs.rank);
                let mut sign = 1i8;
                for (j, &k) in tuple.iter().enumerate() {
                    arg = &arg + &images[j][k];
                    sign *= self.weyl.elements[k].sign;
                }
                let h = self.dh.dh_density(&arg)?;
                Ok(TermTotals {
                    value: if sign > 0 { h.value } else { -h.value },
                    walls: u64::from(h.wall),
                })
            })
            .try_reduce(TermTotals::zero, |a, b| Ok(a.merge(b)))?;
        Ok(self.finish(totals, Method::Naive, terms, xis))
    }

    /// `g(zeta) = sum_w sgn(w)^N H(w · zeta)`.
    ///
    /// Substituting `w_j = w_1 w_j'` turns the sign of a tuple into
    /// `sgn(w_1)^N prod_{j>=2} sgn(w_j')`, so the exponent only drops out
    /// for odd `N`.
    pub fn g_function(&self, zeta: &Weight) -> Result<(Q, u64), ReducedVolError> {
        let mut total = Q::zero();
        let mut walls = 0;
        for w in self.weyl.iter() {
            let h = self.dh.dh_density(&w.act_unchecked(zeta))?;
            walls += u64::from(h.wall);
            if w.sign < 0 && self.n % 2 == 1 {
                total -= h.value;
            } else {
                total += h.value;
            }
        }
        Ok((total, walls))
    }

    /// Sum over `W^{N-1}` of `prod sgn(w_j') g(xi_1 + sum_{j>=2} w_j' xi_j)`.
    pub fn factored_signed_sum_volume(
        &self,
        xis: &[Weight],
    ) -> Result<VolumeResult, ReducedVolError> {
        self.check(xis)?;
        let terms = self.term_count(self.n - 1)?;
        self.term_count(self.n)?;
        let images = self.orbit_images(&xis[1..]);
        let totals = (0..terms)
            .into_par_iter()
            .map(|idx| -> Result<TermTotals, ReducedVolError> {
                let tuple = self.decode(idx, self.n - 1);
                let mut zeta = xis[0].clone();
                let mut sign = 1i8;
                for (j, &k) in tuple.iter().enumerate() {
                    zeta = &zeta + &images[j][k];
                    sign *= self.weyl.elements[k].sign;
                }
                let (g, walls) = self.g_function(&zeta)?;
                Ok(TermTotals {
                    value: if sign > 0 { g } else { -g },
                    walls,
                })
            })
            .try_reduce(TermTotals::zero, |a, b| Ok(a.merge(b)))?;
        Ok(self.finish(totals, Method::Factored, terms, xis))
    }

    pub fn volume(&self, xis: &[Weight], method: Method) -> Result<VolumeResult, ReducedVolError> {
        match method {
            Method::Naive => self.signed_sum_volume(xis),
            _ => self.factored_signed_sum_volume(xis),
        }
    }

    pub fn check_assumptions(&self, xis: &[Weight]) -> Result<AssumptionReport, ReducedVolError> {
        self.check(xis)?;
        let regular = xis.iter().map(|x| self.rs.is_regular(x)).collect();
        let images = self.orbit_images(xis);
        let level_set_nonempty = level_set_may_be_nonempty(&images, xis, self.rs.rank);

        let terms = self.term_count(self.n)?;
        let mut distinct: BTreeSet<Weight> = BTreeSet::new();
        for idx in 0..terms {
            let tuple = self.decode(idx, self.n);
            let mut arg = Weight::zero(self.rs.rank);
            for (j, &k) in tuple.iter().enumerate() {
                arg = &arg + &images[j][k];
            }
            distinct.insert(arg);
        }
        let wall_images = distinct
            .into_iter()
            .filter(|x| self.dh.in_cone(x) == ConePosition::Boundary)
            .collect();
        Ok(AssumptionReport {
            regular,
            level_set_nonempty,
            wall_images,
        })
    }
}

/// Necessary condition for `0 in O_1 + ... + O_N`: for every `j`,
/// `-xi_j in sum_{k != j} conv(W · xi_k)`. Conjugating a solution so that its
/// `j`-th component is `xi_j` and projecting the rest to the torus gives the
/// containment; for A1 this is exactly the polygon inequality.
fn level_set_may_be_nonempty(images: &[Vec<Weight>], xis: &[Weight], rank: usize) -> bool {
    (0..xis.len()).all(|j| {
        let others: Vec<&Vec<Weight>> = images
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, orbit)| orbit)
            .collect();
        let target = -&xis[j];
        point_in_hull_sum(&others, &target, rank)
    })
}

fn point_in_hull_sum(orbits: &[&Vec<Weight>], target: &Weight, rank: usize) -> bool {
    let vars: Vec<(usize, &Weight)> = orbits
        .iter()
        .enumerate()
        .flat_map(|(j, orbit)| orbit.iter().map(move |w| (j, w)))
        .collect();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..orbits.len() {
        rows.push(
            vars.iter()
                .map(|(jj, _)| if *jj == j { Q::one() } else { Q::zero() })
                .collect(),
        );
        rhs.push(Q::one());
    }
    for k in 0..rank {
        rows.push(vars.iter().map(|(_, w)| w.coords[k].clone()).collect());
        rhs.push(target.coords[k].clone());
    }
    lp::feasible_point(&rows, &rhs).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionReport {
    /// Per-weight regularity (nonzero pairing with every root).
    pub regular: Vec<bool>,
    /// Necessary condition for a nonempty level set; `false` proves it empty.
    pub level_set_nonempty: bool,
    /// Distinct moment images `sum_j w_j xi_j` on walls of the support cone.
    pub wall_images: Vec<Weight>,
}

impl AssumptionReport {
    pub const SMOOTHNESS: &'static str = "not checkable here";

    pub fn all_regular(&self) -> bool {
        self.regular.iter().all(|&r| r)
    }
}

pub fn signed_sum_volume(orbit: &OrbitTuple) -> Result<VolumeResult, ReducedVolError> {
    ReducedVolume::new(&orbit.rs, orbit.n())?.signed_sum_volume(&orbit.xis)
}

pub fn factored_signed_sum_volume(orbit: &OrbitTuple) -> Result<VolumeResult, ReducedVolError> {
    ReducedVolume::new(&orbit.rs, orbit.n())?.factored_signed_sum_volume(&orbit.xis)
}

pub fn check_assumptions(orbit: &OrbitTuple) -> Result<AssumptionReport, ReducedVolError> {
    ReducedVolume::new(&orbit.rs, orbit.n())?.check_assumptions(&orbit.xis)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusVolume {
    pub value: Q,
    pub warnings: Vec<String>,
}

/// `sum_w sgn(w) H_beta(w · eta)`: the torus reduction of a single orbit.
pub fn torus_reduced_orbit_volume(
    rs: &RootSystem,
    eta: &Weight,
) -> Result<TorusVolume, ReducedVolError> {
    if eta.dim() != rs.rank {
        return Err(RootSystemError::DimensionMismatch {
            expected: rs.rank,
            actual: eta.dim(),
        }
        .into());
    }
    let weyl = WeylGroup::generate(rs)?;
    let dh = DhProblem::new(rs, 1)?;
    let mut value = Q::zero();
    let mut walls = 0;
    for w in weyl.iter() {
        let h = dh.dh_density(&w.act_unchecked(eta))?;
        walls += u32::from(h.wall);
        value += q(i64::from(w.sign)) * h.value;
    }
    let mut warnings = Vec::new();
    if !rs.is_regular(eta) {
        warnings.push(format!("{eta} is not regular; the sum vanishes"));
    }
    if walls > 0 {
        warnings.push(format!("{walls} DH arguments lie on walls of the support cone"));
    }
    Ok(TorusVolume { value, warnings })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Calibration {
    Known { constant: Q, provenance: String },
    Unknown,
}

impl Calibration {
    pub fn constant(&self) -> Option<&Q> {
        match self {
            Calibration::Known { constant, .. } => Some(constant),
            Calibration::Unknown => None,
        }
    }
}

/// Weights used to calibrate A2, N = 3 against the 6-partition formula.
pub fn su3_calibration_point() -> SU3Weights {
    SU3Weights::from_ints([2, 2, 2], [1, 1, 1])
}

/// Constant `c` with `c · raw = geometric volume`, where a source exists.
pub fn calibration(group: GroupType, n: usize) -> Calibration {
    match (group.series, group.rank, n) {
        (Series::A, 1, 3) => Calibration::Known {
            constant: exact::qf(-1, 2),
            provenance: "A1, N = 3: the reduced space of a closing triangle is one point, \
                         raw sum at (1,1,1) is -2"
                .to_string(),
        },
        (Series::A, 2, 3) => {
            let point = su3_calibration_point();
            let raw = su3::jj_volume(&point).value;
            let st = su3::st_volume(&point).expect("calibration point satisfies ST hypotheses");
            Calibration::Known {
                constant: st.value / raw,
                provenance: format!("A2, N = 3: 6-partition formula over raw sum at {point}"),
            }
        }
        _ => Calibration::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{qf, qvec};
    use crate::rootsystem::{build_root_system, su3_lm_to_simple};

    fn a1() -> RootSystem {
        build_root_system(Series::A, 1).unwrap()
    }

    fn a2() -> RootSystem {
        build_root_system(Series::A, 2).unwrap()
    }

    fn ws(xs: &[i64]) -> Vec<Weight> {
        xs.iter().map(|&x| Weight::from_ints(&[x])).collect()
    }

    #[test]
    fn moment_image_examples() {
        let rs = a1();
        let weyl = WeylGroup::generate(&rs).unwrap();
        let id = &weyl.elements[weyl.identity_index()];
        let flip = weyl.iter().find(|w| w.sign < 0).unwrap();
        assert_eq!(moment_image(&[id, flip], &ws(&[3, 1])).unwrap().coords, qvec(&[2]));
        assert_eq!(moment_image(&[id, id, id], &ws(&[3, 1, 4])).unwrap().coords, qvec(&[8]));
        assert!(moment_image(&[id], &ws(&[3, 1])).is_err());

        let rs = a2();
        let weyl = WeylGroup::generate(&rs).unwrap();
        let v1 = weyl.index_of(&su3::weyl_lm_to_simple(&su3::WEYL_LM[1])).unwrap();
        let e = &weyl.elements[weyl.identity_index()];
        let xi = vec![Weight::from_ints(&[1, 1]); 3];
        let image = moment_image(&[&weyl.elements[v1], e, e], &xi).unwrap();
        assert_eq!(image.coords, qvec(&[2, 3]));
    }

    #[test]
    fn a1_triangle() {
        let orbit = OrbitTuple::new(a1(), ws(&[1, 1, 1])).unwrap();
        assert_eq!(signed_sum_volume(&orbit).unwrap().value, q(-2));
        assert_eq!(factored_signed_sum_volume(&orbit).unwrap().value, q(-2));
        let far = OrbitTuple::new(a1(), ws(&[5, 1, 1])).unwrap();
        assert_eq!(signed_sum_volume(&far).unwrap().value, q(0));
    }

    #[test]
    fn a1_even_n_uses_unsigned_outer_sum() {
        let engine = ReducedVolume::new(&a1(), 4).unwrap();
        let xis = ws(&[1, 1, 1, 1]);
        // Hand count: 4 - 4·2 = -4.
        assert_eq!(engine.signed_sum_volume(&xis).unwrap().value, q(-4));
        assert_eq!(engine.factored_signed_sum_volume(&xis).unwrap().value, q(-4));
    }

    #[test]
    fn wall_fixed_weight_vanishes() {
        let engine = ReducedVolume::new(&a2(), 3).unwrap();
        let xis = vec![Weight::from_ints(&[1, 2]), Weight::from_ints(&[2, 3]), Weight::from_ints(&[3, 2])];
        let res = engine.signed_sum_volume(&xis).unwrap();
        assert_eq!(res.value, q(0));
        assert!(res.warnings.iter().any(|w| w.contains("not regular")));
        assert_eq!(engine.factored_signed_sum_volume(&xis).unwrap().value, q(0));
    }

    #[test]
    fn a2_matches_closed_form() {
        let xi = su3_lm_to_simple(&q(2), &q(1));
        let engine = ReducedVolume::new(&a2(), 3).unwrap();
        let res = engine.signed_sum_volume(&[xi.clone(), xi.clone(), xi]).unwrap();
        assert_eq!(res.terms_evaluated, 216);
        let jj = su3::jj_volume(&SU3Weights::from_ints([2, 2, 2], [1, 1, 1]));
        assert_eq!(res.value, jj.value);
    }

    #[test]
    fn torus_reduction() {
        assert_eq!(torus_reduced_orbit_volume(&a1(), &Weight::from_ints(&[1])).unwrap().value, q(1));
        let wall = torus_reduced_orbit_volume(&a2(), &Weight::from_ints(&[1, 2])).unwrap();
        assert_eq!(wall.value, q(0));
        assert!(!wall.warnings.is_empty());
        // Oracle: the closed form at each of the six (l, m) images of (2, 1).
        let expected: Q = (0..6)
            .map(|i| {
                let v = su3::WEYL_LM[i];
                let (l, m) = (2 * v[0][0] + v[0][1], 2 * v[1][0] + v[1][1]);
                q(su3::weyl_lm_sign(i)) * su3::h_closed_form(&q(l), &q(m))
            })
            .sum();
        let got = torus_reduced_orbit_volume(&a2(), &su3_lm_to_simple(&q(2), &q(1))).unwrap();
        assert_eq!(got.value, expected);
    }

    #[test]
    fn assumption_checks() {
        let xi = su3_lm_to_simple(&q(2), &q(1));
        let orbit = OrbitTuple::new(a2(), vec![xi.clone(), xi.clone(), xi]).unwrap();
        let report = check_assumptions(&orbit).unwrap();
        assert!(report.all_regular());
        assert!(report.level_set_nonempty);

        let orbit = OrbitTuple::new(
            a2(),
            vec![su3_lm_to_simple(&q(3), &q(3)), su3_lm_to_simple(&q(2), &q(1)), su3_lm_to_simple(&q(2), &q(1))],
        )
        .unwrap();
        assert_eq!(check_assumptions(&orbit).unwrap().regular, vec![false, true, true]);

        let far = OrbitTuple::new(a1(), ws(&[5, 1, 1])).unwrap();
        assert!(!check_assumptions(&far).unwrap().level_set_nonempty);
        let closes = OrbitTuple::new(a1(), ws(&[3, 2, 2])).unwrap();
        assert!(check_assumptions(&closes).unwrap().level_set_nonempty);
        let boundary = OrbitTuple::new(a1(), ws(&[2, 1, 1])).unwrap();
        assert!(!check_assumptions(&boundary).unwrap().wall_images.is_empty());
    }

    #[test]
    fn calibration_constants() {
        assert_eq!(calibration(GroupType::new(Series::A, 1), 3).constant(), Some(&qf(-1, 2)));
        assert_eq!(calibration(GroupType::new(Series::A, 2), 3).constant(), Some(&qf(-1, 6)));
        assert_eq!(calibration(GroupType::new(Series::B, 2), 3), Calibration::Unknown);
        assert_eq!(calibration(GroupType::new(Series::A, 1), 4), Calibration::Unknown);
    }

    #[test]
    fn errors() {
        assert_eq!(OrbitTuple::new(a1(), ws(&[1, 1])).unwrap_err(), ReducedVolError::TooFewOrbits(2));
        let engine = ReducedVolume::new(&a2(), 3).unwrap().with_cap(100);
        let xi = Weight::from_ints(&[1, 1]);
        assert!(matches!(
            engine.signed_sum_volume(&[xi.clone(), xi.clone(), xi.clone()]),
            Err(ReducedVolError::TermCapExceeded { terms: 216, cap: 100 })
        ));
        assert!(matches!(
            engine.signed_sum_volume(&[xi.clone(), xi]),
            Err(ReducedVolError::WrongOrbitCount { expected: 3, actual: 2 })
        ));
    }
}
