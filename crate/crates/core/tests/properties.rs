//! Property-based invariants: randomized inputs exercising the contracts
//! the deterministic unit suites pin down pointwise.

mod common;

use common::{ann_cardinality_oracle, module_mod, zmod};
use proptest::prelude::*;

use proreg::cert::{outcome_to_data, seal, verify_file, Payload, TaskEcho};
use proreg::matrix::Matrix;
use proreg::module::{annihilator, are_isomorphic, cardinality};
use proreg::solve::solve_linear;
use proreg::tower::koszul;
use proreg::wpr::{element_wpr, torsion_bound_ring};

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for t in 0..k.min(n - k) {
        acc = acc * (n - t) / (t + 1);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Library annihilator cardinalities agree with brute-force enumeration.
    #[test]
    fn annihilator_matches_enumeration(
        n in prop::sample::select(vec![2u64, 3, 4, 6, 8, 9]),
        a in 0u64..9,
        i in 1u32..4,
        row in prop::collection::vec(0i64..9, 2),
    ) {
        let rows = vec![row];
        let m = module_mod(n, 2, &rows);
        let ring = zmod(n);
        let (ann, _) = annihilator(&m, &ring.int((a % n) as i64), i).unwrap();
        let oracle = ann_cardinality_oracle(n, 2, &rows, a % n, i);
        prop_assert_eq!(cardinality(&ann).unwrap().to_string(), oracle.to_string());
    }

    /// Koszul complexes have binomial rank profiles in every degree.
    #[test]
    fn koszul_rank_profile_is_binomial(
        n in prop::sample::select(vec![4u64, 6, 9]),
        len in 1usize..4,
        i in 0u32..3,
        elems in prop::collection::vec(0i64..9, 3),
    ) {
        let ring = zmod(n);
        let seq: Vec<_> = elems.iter().take(len).map(|&e| ring.int(e)).collect();
        let k = koszul(&ring, &seq, i).unwrap();
        for (q, rank) in k.rank_profile() {
            prop_assert_eq!(rank as u64, binomial(len as u64, (-q) as u64));
        }
    }

    /// A system built from a known solution is solvable, and the returned
    /// particular solution satisfies it exactly.
    #[test]
    fn solve_linear_roundtrip(
        n in prop::sample::select(vec![4u64, 6, 8, 9]),
        entries in prop::collection::vec(0i64..9, 6),
        x in prop::collection::vec(0i64..9, 3),
    ) {
        let ring = zmod(n);
        let lhs = Matrix::from_rows(
            entries.chunks(3).map(|r| r.iter().map(|&v| ring.int(v)).collect()).collect(),
        );
        let xs: Vec<_> = x.iter().map(|&v| ring.int(v)).collect();
        let rhs_col = lhs.mul_vec(&xs, &ring);
        let rhs = Matrix::from_cols(vec![rhs_col.clone()]);
        let sol = solve_linear(&ring, &lhs, &rhs).unwrap();
        let back = lhs.mul_vec(&sol.particular.col(0), &ring);
        prop_assert_eq!(back, rhs_col);
    }

    /// The annihilator chain of an element is ascending: cardinalities never
    /// decrease along the torsion bound report.
    #[test]
    fn annihilator_chains_ascend(
        n in prop::sample::select(vec![4u64, 8, 9, 12]),
        a in 0i64..12,
    ) {
        let ring = zmod(n);
        let report = torsion_bound_ring(&ring, &ring.int(a), 6).unwrap();
        let cards: Vec<u64> = report
            .chain
            .iter()
            .map(|c| c.cardinality.as_ref().unwrap().parse().unwrap())
            .collect();
        for w in cards.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    /// Emitted element certificates always survive a serialize/verify trip.
    #[test]
    fn element_certificates_always_verify(
        n in prop::sample::select(vec![4u64, 8, 16, 9, 27]),
        a in 0i64..6,
    ) {
        let ring = zmod(n);
        let out = element_wpr(&ring, &ring.int(a), 8).unwrap();
        let cf = seal(
            TaskEcho { name: "prop".into(), kind: "element-wpr".into() },
            Payload::Wpr { outcome: outcome_to_data(&out) },
        );
        let json = serde_json::to_string(&cf).unwrap();
        let back: proreg::cert::CertificateFile = serde_json::from_str(&json).unwrap();
        verify_file(&back).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}

/// Gamma is idempotent on random cyclic modules whenever determined.
#[test]
fn gamma_idempotence_random() {
    use common::Lcg;
    use proreg::adic::{gamma, GammaOutcome};
    let mut rng = Lcg::new(77);
    for _ in 0..12 {
        let n = [4u64, 6, 8, 9, 12][rng.below(5) as usize];
        let c = rng.below(n) as i64;
        let a = rng.below(n) as i64;
        let ring = zmod(n);
        let m = module_mod(n, 1, &[vec![c]]);
        let g1 = match gamma(&m, &[ring.int(a)], 6).unwrap() {
            GammaOutcome::Determined { module, .. } => module,
            GammaOutcome::Undetermined { .. } => continue,
        };
        let g2 = match gamma(&g1, &[ring.int(a)], 6).unwrap() {
            GammaOutcome::Determined { module, .. } => module,
            GammaOutcome::Undetermined { .. } => continue,
        };
        assert!(are_isomorphic(&g1, &g2).unwrap(), "n={n} c={c} a={a}");
    }
}
