use modinv_core::catalog;
use modinv_core::commutant::rationalize_value;
use modinv_core::enumerate::{enumerate_invariants, enumerate_invariants_with, is_invariant, EnumerateOptions};
use modinv_core::extension::{
    locality_test, rehren_admissible, restrict, sun_current_model, sun_divisor_table, zn_deltas, zn_invariant,
};
use modinv_core::gram::{gram_factorize, rows_to_matrix};
use modinv_core::graph;
use modinv_core::io::ModelFile;
use modinv_core::nimrep::su2_nimrep_from_graph;
use modinv_core::par::Exec;
use modinv_core::spin::{format_rational, parse_rational};
use modinv_core::IntMatrix;
use num_rational::Rational64;
use proptest::prelude::*;

fn zn_case() -> impl Strategy<Value = (usize, i64)> {
    (2usize..=24).prop_flat_map(|n| {
        let valid = catalog::zn_valid_a(n);
        (Just(n), proptest::sample::select(valid))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn catalog_rings_satisfy_axioms(k in 1usize..=20, (n, a) in zn_case()) {
        for spec in [catalog::su2_model(k).unwrap(), catalog::zn_model(n, a).unwrap()] {
            let report = spec.ring.verify_axioms();
            prop_assert!(report.is_valid(), "{}: {:?}", spec.name, report.violations);
        }
    }

    #[test]
    fn tensor_products_stay_modular(k in 1usize..=4, (n, a) in (2usize..=5).prop_flat_map(|n| (Just(n), proptest::sample::select(catalog::zn_valid_a(n))))) {
        let left = catalog::su2_model(k).unwrap();
        let right = catalog::zn_model(n, a).unwrap();
        let spec = left.tensor(&right).unwrap();
        prop_assert!(spec.ring.verify_axioms().is_valid());
        let md = spec.build().unwrap();
        let r = md.identity_residuals().unwrap();
        prop_assert!(r.unitarity < 1e-8 && r.st_cubed < 1e-8 && r.s_squared < 1e-8);
        prop_assert!(md.verlinde_check(&spec.ring).unwrap() < 1e-8);
    }

    #[test]
    fn zn_family_members_are_invariants((n, a) in zn_case(), pick in any::<prop::sample::Index>()) {
        let deltas = zn_deltas(n);
        let delta = deltas[pick.index(deltas.len())];
        let md = catalog::zn_model(n, a).unwrap().build().unwrap();
        let z = zn_invariant(n, a, delta).unwrap();
        let check = is_invariant(&md, &z).unwrap();
        prop_assert!(check.is_invariant(), "n={n} a={a} δ={delta}: {check:?}");
    }

    #[test]
    fn restriction_traces(table in proptest::sample::select(catalog::branching_catalog()), seed in any::<u64>()) {
        let e = table.ext_labels.len();
        let b = &table.b;
        let bt_b = b.transpose().mul(b).unwrap();
        prop_assert_eq!(restrict(&IntMatrix::identity(e), &table, &table).unwrap(), bt_b);
        // a pseudo-random permutation of the extended labels
        let mut p: Vec<usize> = (0..e).collect();
        let mut s = seed;
        for i in (1..e).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            p.swap(i, (s >> 33) as usize % (i + 1));
        }
        let z = restrict(&IntMatrix::permutation(&p), &table, &table).unwrap();
        let expected: i64 = (0..e).map(|t| (0..b.cols()).map(|l| b[(t, l)] * b[(p[t], l)]).sum::<i64>()).sum();
        prop_assert_eq!(z.trace(), expected);
    }

    #[test]
    fn gram_factorisation_reproduces(rows in proptest::collection::vec(proptest::collection::vec(0i64..=2, 4), 1..=4)) {
        let b = IntMatrix::from_rows(&rows).unwrap();
        let g = b.transpose().mul(&b).unwrap();
        let found = gram_factorize(&g, None, 1_000_000).unwrap().expect("bᵀb has a factorisation");
        let f = rows_to_matrix(&found, 4).unwrap();
        prop_assert_eq!(f.transpose().mul(&f).unwrap(), g);
    }

    #[test]
    fn rationals_round_trip(p in -5000i64..5000, q in 1i64..2000) {
        let r = Rational64::new(p, q);
        prop_assert_eq!(parse_rational(&format_rational(r)).unwrap(), r);
        prop_assert_eq!(rationalize_value(p as f64 / q as f64, 1_000_000, 1e-9), Some(r));
    }

    #[test]
    fn model_files_round_trip((n, a) in zn_case()) {
        let spec = catalog::zn_model(n, a).unwrap();
        let file = ModelFile::from_spec(&spec);
        let back = ModelFile::from_json(&file.to_json().unwrap()).unwrap().to_spec().unwrap();
        prop_assert_eq!(back.ring.tensor(), spec.ring.tensor());
        prop_assert_eq!(back.spins, spec.spins);
    }
}

#[test]
fn admissibility_matches_divisor_rule() {
    for n in 1..=12 {
        for k in 1..=12 {
            let rule = sun_divisor_table(n, k).unwrap();
            let spec = sun_current_model(n, k).unwrap();
            let mut orders: Vec<usize> =
                rehren_admissible(&spec.ring, &spec.spins).unwrap().iter().map(|r| r.order).collect();
            orders.sort_unstable();
            assert_eq!(orders, rule, "SU({n})_{k}");
            for &m in &rule {
                locality_test(n, k, m).unwrap();
            }
        }
    }
}

#[test]
fn path_graph_nimrep_is_the_fusion_ring() {
    for k in 1..=12 {
        let ring = catalog::su2_model(k).unwrap().ring;
        let nim = su2_nimrep_from_graph(k, &graph::a_graph(k + 1).unwrap()).unwrap().unwrap();
        assert!(nim.satisfies(&ring));
        for l in 0..=k {
            assert_eq!(nim.mats[l], ring.fusion_matrix(l).unwrap(), "k={k} λ={l}");
        }
    }
}

#[test]
fn sequential_and_parallel_agree() {
    for name in ["su2:10", "su2:16", "so8_1", "so16_1", "zn:12:1"] {
        let md = catalog::by_name(name).unwrap().build().unwrap();
        let run = |exec| {
            enumerate_invariants_with(&md, EnumerateOptions { exec, ..Default::default() }).unwrap().invariants
        };
        assert_eq!(run(Exec::Sequential), run(Exec::Parallel), "{name}");
        assert_eq!(run(Exec::Parallel), enumerate_invariants(&md).unwrap().invariants);
    }
}
