use num_traits::pow;
use orbitvol::dhfun::DhProblem;
use orbitvol::exact::{qf, Q};
use orbitvol::polyvol::{exact_volume, BaseVertex, Fiber};
use orbitvol::reducedvol::ReducedVolume;
use orbitvol::rootsystem::{
    build_root_system, simple_to_su3_lm, su3_lm_to_simple, GroupType, RootSystem, Series, Weight,
};
use orbitvol::su3::{weyl_lm_sign, weyl_lm_to_simple, WEYL_LM};
use orbitvol::weylgroup::WeylGroup;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=6).prop_map(|(n, d)| qf(n, d))
}

fn positive() -> impl Strategy<Value = Q> {
    (1i64..=30, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

fn group() -> impl Strategy<Value = RootSystem> {
    prop::sample::select(GroupType::SUPPORTED.to_vec())
        .prop_map(|(series, rank)| build_root_system(series, rank).unwrap())
}

#[test]
fn su3_weyl_matrices_are_the_a2_weyl_group() {
    let rs = build_root_system(Series::A, 2).unwrap();
    let weyl = WeylGroup::generate(&rs).unwrap();
    let mut seen = Vec::new();
    for (i, v) in WEYL_LM.iter().enumerate() {
        let m = weyl_lm_to_simple(v);
        let k = weyl.index_of(&m).expect("v_i is a Weyl element");
        assert_eq!(i64::from(weyl.elements[k].sign), weyl_lm_sign(i));
        seen.push(k);
    }
    seen.sort_unstable();
    seen.dedup();
    assert_eq!(seen.len(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fundamental_coordinates_round_trip(rs in group(), seed in prop::collection::vec(rational(), 4)) {
        let fw: Vec<Q> = seed.into_iter().take(rs.rank).collect();
        prop_assume!(fw.len() == rs.rank);
        let xi = rs.fundamental_to_simple(&fw).unwrap();
        prop_assert_eq!(rs.simple_to_fundamental(&xi).unwrap(), fw);
    }

    #[test]
    fn su3_coordinates_are_consistent(l in rational(), m in rational()) {
        let rs = build_root_system(Series::A, 2).unwrap();
        let xi = su3_lm_to_simple(&l, &m);
        prop_assert_eq!(simple_to_su3_lm(&xi), (l.clone(), m.clone()));
        prop_assert_eq!(rs.simple_to_fundamental(&xi).unwrap(), vec![&l - &m, m]);
    }

    #[test]
    fn dh_density_is_homogeneous(x1 in rational(), x2 in rational(), t in positive()) {
        let rs = build_root_system(Series::A, 2).unwrap();
        let dh = DhProblem::new(&rs, 2).unwrap();
        let xi = Weight::new(vec![x1, x2]);
        let base = dh.dh_density(&xi).unwrap().value;
        let scaled = dh.dh_density(&xi.scale(&t)).unwrap().value;
        prop_assert_eq!(scaled, base * pow(t, dh.free_dim()));
    }

    #[test]
    fn fiber_volume_ignores_constraint_order(
        x1 in positive(),
        x2 in positive(),
        perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let rs = build_root_system(Series::A, 2).unwrap();
        let dh = DhProblem::new(&rs, 2).unwrap();
        let Fiber::Feasible(p) = dh.fiber(&Weight::new(vec![x1, x2])).unwrap() else {
            return Ok(());
        };
        let v = exact_volume(&p).unwrap().value;
        let permuted = p.permuted(&perm);
        prop_assert_eq!(&exact_volume(&permuted).unwrap().value, &v);
        prop_assert_eq!(
            &orbitvol::polyvol::exact_volume_with(&p, BaseVertex::Last).unwrap().value,
            &v
        );
    }

    #[test]
    fn volume_is_continuous_across_walls(x2 in positive(), x3 in positive(), x4 in positive(), k in 1i64..=5) {
        // Piecewise linear (a = 1) and odd in the first weight, so V(h) -> 0 as h -> 0.
        let rs = build_root_system(Series::A, 1).unwrap();
        let engine = ReducedVolume::new(&rs, 4).unwrap();
        let value = |x1: Q| {
            let xis = [x1, x2.clone(), x3.clone(), x4.clone()].map(|c| Weight::new(vec![c]));
            engine.factored_signed_sum_volume(&xis).unwrap().value
        };
        let h = qf(1, 1000 * k);
        let (left, right) = (value(-h.clone()), value(h.clone()));
        prop_assert_eq!(&left, &-right.clone());
        prop_assert_eq!(value(&h + &h), &right + &right);
    }
}
