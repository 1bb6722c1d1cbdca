use std::sync::Arc;

use hilab::fredholm::GradedDirac;
use hilab::kernels::{elementary_idempotent, slice_projection};
use hilab::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const E2: SymmetricSpaceModel = SymmetricSpaceModel::Euclidean(2);
const H: SymmetricSpaceModel = SymmetricSpaceModel::HyperbolicPlane;

fn area() -> GroupCochain {
    j_map(&InvariantForm::euclidean_volume(2), E2, &QuadratureRule::new(2, 1).unwrap()).unwrap()
}

fn hyp_element() -> impl Strategy<Value = GroupElement> {
    (-2.0..2.0f64, 0.3..3.0f64, -3.0..3.0f64).prop_map(|(x, y, th)| {
        let t = Sl2::translation_to(Complex64::new(x, y));
        GroupElement::Hyperbolic(t.mul(&Sl2::rotation(th)))
    })
}

fn e2_element() -> impl Strategy<Value = GroupElement> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| GroupElement::translation(&[x, y]))
}

fn small_conv(l: LatticeGroup) -> impl Strategy<Value = ConvElement> {
    prop::collection::vec(((-2i64..=2, -2i64..=2), -1.0..1.0f64), 1..5).prop_map(move |pts| {
        let mut a = ConvElement::zero(l);
        for ((i, j), v) in pts {
            a.set(&[i, j], a.get(&[i, j]) + v).unwrap();
        }
        a
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hyperbolic_distance_is_invariant(g in hyp_element(), a in hyp_element(), b in hyp_element()) {
        let (x, y) = (H.orbit_point(&a), H.orbit_point(&b));
        let d = H.distance(&x, &y);
        let d2 = H.distance(&H.act(&g, &x).unwrap(), &H.act(&g, &y).unwrap());
        prop_assert!((d - d2).abs() <= 1e-9 * (1.0 + d));
        prop_assert!((d - H.distance(&y, &x)).abs() <= 1e-12 * (1.0 + d));
    }

    #[test]
    fn compose_with_inverse_is_identity(g in hyp_element(), a in hyp_element()) {
        let x = H.orbit_point(&a);
        let back = H.act(&H.compose(&H.inverse(&g), &g), &x).unwrap();
        prop_assert!(H.distance(&back, &x) < 1e-9);
    }

    #[test]
    fn area_cochain_is_a_homogeneous_alternating_cocycle(
        g in prop::collection::vec(e2_element(), 4), s in e2_element()
    ) {
        let c = area();
        let v = c.call(&g[..3]);
        let shifted: Vec<_> = g[..3].iter().map(|x| E2.compose(&s, x)).collect();
        prop_assert!((c.call(&shifted) - v).abs() <= 1e-9 * (1.0 + v.abs()));
        let swapped = [g[1].clone(), g[0].clone(), g[2].clone()];
        prop_assert!((c.call(&swapped) + v).abs() <= 1e-9 * (1.0 + v.abs()));
        prop_assert!(delta(&c).call(&g).abs() <= 1e-9);
    }

    #[test]
    fn hyperbolic_area_is_invariant_and_bounded(g in prop::collection::vec(hyp_element(), 3), s in hyp_element()) {
        let c = j_map(&InvariantForm::hyperbolic_area(), H, &QuadratureRule::new(2, 48).unwrap()).unwrap();
        let v = c.call(&g);
        let moved: Vec<_> = g.iter().map(|x| H.compose(&s, x)).collect();
        prop_assert!(v.abs() < std::f64::consts::PI);
        prop_assert!((c.call(&moved) - v).abs() < 1e-8);
    }

    #[test]
    fn convolution_is_associative_and_tau_is_cyclic(
        a in small_conv(LatticeGroup::new(2, 0.5, 8).unwrap()),
        b in small_conv(LatticeGroup::new(2, 0.5, 8).unwrap()),
        c in small_conv(LatticeGroup::new(2, 0.5, 8).unwrap()),
    ) {
        let left = convolve(&convolve(&a, &b).unwrap(), &c).unwrap();
        let right = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
        for (x, y) in left.values().iter().zip(right.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let sym = cyclic_symmetrize(&area());
        let t = tau_g(&sym, &[a.clone(), b.clone(), c.clone()]).unwrap();
        let rotated = tau_g(&sym, &[c, a, b]).unwrap();
        prop_assert!((t - rotated).abs() < 1e-10 * (1.0 + t.abs()));
    }

    #[test]
    fn elementary_idempotents_pair_to_their_rank(
        a in small_conv(LatticeGroup::new(2, 1.0, 12).unwrap()),
        b in small_conv(LatticeGroup::new(2, 1.0, 12).unwrap()),
    ) {
        let l = a.lattice();
        let e = elementary_idempotent(&a, &b).unwrap();
        let one = GroupCochain::constant(0, E2, 1.0);
        let q = Idempotent::from_elems(Arc::new(l), 1, vec![ConvElement::zero(l)]).unwrap();
        let v = chern_pairing(&e, &q, &hilab::cyclic::tau_g_cochain(&one, l)).unwrap();
        prop_assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn morita_identity_holds_for_any_cochain(
        a in small_conv(LatticeGroup::new(2, 0.5, 10).unwrap()),
        b in small_conv(LatticeGroup::new(2, 0.5, 10).unwrap()),
        v in prop::collection::vec(-1.0..1.0f64, 3),
        k in 0.1..2.0f64,
    ) {
        prop_assume!(v.iter().any(|x| x.abs() > 0.1));
        let action = ProperActionData::new(2, 0.5, Slice::circle(3, 1.5).unwrap()).unwrap();
        let e1 = elementary_idempotent(&a, &b).unwrap();
        let e2 = slice_projection(action.slice(), &[v]).unwrap();
        let c = cyclic_symmetrize(&GroupCochain::new(2, E2, false, move |g: &[GroupElement]| {
            let p: Vec<&[f64]> = g.iter().map(|x| x.as_translation().unwrap()).collect();
            (k * p[1][0] - p[0][1]).cos() * (1.0 + p[2][0]) + p[2][1] * p[0][0]
        }));
        let (lhs, rhs) = morita_check(&e1, &e2, &c, &slice_cutoff(&action)).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + rhs.abs()));
    }

    #[test]
    fn projector_pairings_match_the_singular_value_oracle(p in 1usize..12, q in 1usize..12, seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = GradedDirac::random(p, q, &mut rng);
        let want = d.index() as f64;
        prop_assert_eq!(want, p as f64 - q as f64);
        for pr in [cs_projector(&d, None), cm_idempotent(&d), graph_projection(&d), mw_projector(&d, None)] {
            let pr = pr.unwrap();
            prop_assert!(pr.defect() <= 1e-9);
            prop_assert_eq!(trace_pairing(&pr).unwrap().round(), want);
        }
    }

    #[test]
    fn wedge_is_graded_commutative_and_associative(
        a in prop::collection::vec(-1.0..1.0f64, 16),
        b in prop::collection::vec(-1.0..1.0f64, 16),
        c in prop::collection::vec(-1.0..1.0f64, 16),
        ka in 0usize..=4, kb in 0usize..=4,
    ) {
        let mk = |v: &[f64]| (0..16usize).fold(ExtForm::zero(4), |f, m| {
            let idx: Vec<usize> = (0..4).filter(|i| m & (1 << i) != 0).collect();
            f.add(&ExtForm::monomial(4, &idx, v[m]))
        });
        let (x, y, z) = (mk(&a).part(ka), mk(&b).part(kb), mk(&c));
        let sign = if (ka * kb) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(x.wedge(&y).add(&y.wedge(&x).scale(-sign)).max_abs() < 1e-12);
        let l = x.wedge(&y).wedge(&z);
        let r = x.wedge(&y.wedge(&z));
        prop_assert!(l.add(&r.scale(-1.0)).max_abs() < 1e-12);
    }

    #[test]
    fn magnetic_rhs_is_linear_in_the_field(b in -20.0..20.0f64) {
        let action = ProperActionData::new(2, 0.1, Slice::point()).unwrap();
        let chi = cutoff_family(0.4, &action).unwrap();
        let one = CharacteristicForm::pullback(&InvariantForm::euclidean_basis(2, &[]), 2, 2).unwrap();
        let v = higher_index_rhs(&atiyah_singer_form(&CurvatureData::magnetic(2, 2, b).unwrap()), &chi, &one).unwrap();
        prop_assert!((v - b / (2.0 * std::f64::consts::PI)).abs() < 1e-9);
    }

    #[test]
    fn kernel_convolution_respects_partial_trace_of_tensors(
        a in small_conv(LatticeGroup::new(2, 0.5, 8).unwrap()),
        b in small_conv(LatticeGroup::new(2, 0.5, 8).unwrap()),
    ) {
        let l = a.lattice();
        let alg = KernelAlgebra::new(l, Slice::circle(4, 3.0).unwrap());
        let e = slice_projection(alg.slice(), &[vec![1.0, 0.0, 2.0, -1.0], vec![0.0, 1.0, 1.0, 1.0]]).unwrap();
        let ka = InvariantKernel::tensor(&alg, &a, &e).unwrap();
        let kb = InvariantKernel::tensor(&alg, &b, &e).unwrap();
        let lhs = partial_trace(&kernel_convolve(&ka, &kb).unwrap());
        let rhs = convolve(&a, &b).unwrap().scale(2.0);
        for (x, y) in lhs.values().iter().zip(rhs.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}
