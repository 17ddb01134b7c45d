use cnp_core::feasibility::{one_point_disk, scalar_delta, scalar_feasible_x};
use cnp_core::interpolant::{
    assemble_constrained, chain_eval, derivative_at, schur_reduce_constrained, SchurChain, SchurStep,
};
use cnp_core::kernels::{grassmann_sample, kernel_eval};
use cnp_core::linalg::{is_psd, CMat, ToleranceConfig};
use cnp_core::pick::{build_pick_standard, build_px_z2};
use cnp_core::{Complex64, DataSet};
use proptest::prelude::*;

fn in_disk(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn chain() -> impl Strategy<Value = SchurChain> {
    (prop::collection::vec((in_disk(0.95), in_disk(0.95)), 0..4), in_disk(1.0)).prop_map(|(steps, tail)| {
        let steps = steps
            .into_iter()
            .map(|(zeta, value)| SchurStep { zeta, value })
            .collect();
        SchurChain::new(steps, tail).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_is_conjugate_symmetric(seed in 0u64..1000, shape in 0usize..4, z in in_disk(0.95), w in in_disk(0.95)) {
        let (l, lp) = [(1, 1), (1, 2), (2, 3), (2, 4)][shape];
        let p = grassmann_sample(seed, l, lp).unwrap();
        let a = kernel_eval(&p, z, w).unwrap();
        let b = kernel_eval(&p, w, z).unwrap();
        prop_assert!((a - b.adjoint()).norm() < 1e-12);
    }

    #[test]
    fn chain_json_round_trip(ch in chain()) {
        let back = SchurChain::from_json(&ch.to_json()).unwrap();
        prop_assert_eq!(back, ch);
    }

    #[test]
    fn chains_are_schur_functions(ch in chain(), z in in_disk(0.999)) {
        prop_assert!(chain_eval(&ch, z).norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn assembled_chains_meet_the_constraint(ch in chain(), x in in_disk(0.95)) {
        let s = assemble_constrained(&ch, x).unwrap();
        prop_assert!((chain_eval(&s, Complex64::new(0.0, 0.0)) - x).norm() < 1e-12);
        prop_assert!(derivative_at(&s, Complex64::new(0.0, 0.0), 1).unwrap().norm() < 1e-8);
    }

    #[test]
    fn one_point_disk_is_the_feasible_set(z in in_disk(0.95), w in in_disk(0.95), u in in_disk(1.0)) {
        prop_assume!(z.norm() > 0.05);
        let dk = one_point_disk(z, w).unwrap();
        prop_assert!(dk.center.norm() + dk.radius < 1.0);
        let d = DataSet::scalar(&[z], &[w]).unwrap();
        let t = ToleranceConfig::default();
        let x = dk.center + u * (1.5 * dk.radius);
        let v = is_psd(&build_px_z2(&d, &CMat::from_element(1, 1, x)).unwrap(), &t).unwrap();
        prop_assume!((u.norm() * 1.5 - 1.0).abs() > 1e-6);
        prop_assert_eq!(v.psd, dk.contains(x));
        if x.norm() < 1.0 {
            let delta = scalar_feasible_x(&scalar_delta(&d, &t).unwrap(), x, &t).unwrap();
            prop_assert_eq!(delta.psd, v.psd);
        }
    }

    #[test]
    fn reduction_preserves_psd_verdicts(
        pts in prop::collection::vec((in_disk(0.9), in_disk(0.9)), 1..4),
        x in in_disk(0.9),
    ) {
        let nodes: Vec<_> = pts.iter().map(|p| p.0).collect();
        let values: Vec<_> = pts.iter().map(|p| p.1).collect();
        prop_assume!(nodes.iter().all(|z| z.norm() > 0.05));
        prop_assume!(nodes.iter().enumerate().all(|(i, a)| nodes[..i].iter().all(|b| (a - b).norm() > 0.02)));
        let d = DataSet::scalar(&nodes, &values).unwrap();
        let t = ToleranceConfig::default();
        let px = is_psd(&build_px_z2(&d, &CMat::from_element(1, 1, x)).unwrap(), &t).unwrap();
        prop_assume!((px.min_eig / px.scale).abs() > 1e-6);
        match schur_reduce_constrained(&d, x) {
            Ok(r) => {
                let classical = is_psd(&build_pick_standard(&r), &t).unwrap();
                prop_assume!((classical.min_eig / classical.scale).abs() > 1e-6);
                prop_assert_eq!(classical.psd, px.psd);
            }
            // a reduced target off the disk rules out every interpolant with this x
            Err(_) => prop_assert!(!px.psd),
        }
    }
}
