use fgac::classifier::{self, FitConfig, Formulation};
use fgac::connectives::{Isomorphism, TripletSpec};
use fgac::granular::{is_granularly_representable, lower_approximation, upper_approximation, FuzzySet};
use fgac::relations::{
    relation_matrix, verify_t_equivalence, verify_t_preorder, NominalCount, SimilarityConfig, SimilarityKind,
};
use fgac::solver::{assemble_binary, assemble_multiclass, solve, Loss};
use fgac::table::InstanceTable;
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn triplet() -> impl Strategy<Value = TripletSpec> {
    prop_oneof![
        Just(TripletSpec::LUKASIEWICZ),
        (0.3f64..3.0).prop_map(|c| TripletSpec::with_isomorphism(Isomorphism::power(c).unwrap())),
    ]
}

fn kind() -> impl Strategy<Value = SimilarityKind> {
    prop_oneof![
        Just(SimilarityKind::Euclidean),
        Just(SimilarityKind::Supremum),
        Just(SimilarityKind::Dominance),
    ]
}

/// Small mixed tables: numeric columns in [0, 1] and one three-level nominal
/// column, with at least two rows.
fn table() -> impl Strategy<Value = InstanceTable> {
    (2usize..9, 1usize..4).prop_flat_map(|(n, width)| {
        (
            prop::collection::vec(0.0f64..=1.0, n * width),
            prop::collection::vec(0u32..3, n),
        )
            .prop_map(move |(numeric, nominal)| {
                InstanceTable::new(n, width, numeric, vec![3], nominal).unwrap()
            })
    })
}

fn labelled() -> impl Strategy<Value = (InstanceTable, Vec<usize>)> {
    table().prop_flat_map(|t| {
        let n = t.len();
        (Just(t), prop::collection::vec(0usize..3, n)).prop_map(|(t, mut labels)| {
            // ids stay contiguous and at least two classes appear
            labels[0] = 0;
            labels[1] = 1;
            (t, labels)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn t_norm_is_commutative_monotone_with_unit(spec in triplet(), x in 0.0f64..=1.0, y in 0.0f64..=1.0, z in 0.0f64..=1.0) {
        prop_assert!((spec.t(x, y) - spec.t(y, x)).abs() <= TOL);
        prop_assert_eq!(spec.t(1.0, y), y);
        if y <= z {
            prop_assert!(spec.t(x, y) <= spec.t(x, z) + TOL);
        }
        let t = spec.t(x, y);
        prop_assert!((0.0..=1.0).contains(&t));
    }

    #[test]
    fn implicator_is_the_residuum(spec in triplet(), x in 0.0f64..=1.0, y in 0.0f64..=1.0, z in 0.0f64..=1.0) {
        // T(x, y) ≤ z  ⇔  y ≤ I(x, z), up to rounding on both sides
        let i = spec.i(x, z);
        if spec.t(x, y) <= z - 1e-9 {
            prop_assert!(y <= i + 1e-9);
        }
        if y <= i - 1e-9 {
            prop_assert!(spec.t(x, y) <= z + 1e-9);
        }
        prop_assert_eq!(spec.i(1.0, z), z);
        if x <= z {
            prop_assert_eq!(i, 1.0);
        }
    }

    #[test]
    fn negator_and_average_behave(spec in triplet(), x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        prop_assert!((spec.n(spec.n(x)) - x).abs() <= 1e-9);
        prop_assert!((spec.n(x) - spec.i(x, 0.0)).abs() <= TOL);
        let a = spec.avg(x, y);
        prop_assert!(a >= x.min(y) - TOL && a <= x.max(y) + TOL);
        prop_assert_eq!(spec.avg(x, x), x);
    }

    #[test]
    fn relations_are_equivalences_or_preorders(t in table(), kind in kind(), gamma in 0.5f64..5.0, spec in triplet()) {
        let config = SimilarityConfig::fit(&t, gamma, kind, NominalCount::OneHot).unwrap();
        let matrix = relation_matrix(&t, &config).unwrap().through_isomorphism(&spec);
        prop_assert!(matrix.degrees().iter().all(|d| (0.0..=1.0).contains(d)));
        let violations = if kind.is_symmetric() {
            verify_t_equivalence(&matrix, &spec, 1e-9)
        } else {
            verify_t_preorder(&matrix, &spec, 1e-9)
        };
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }

    #[test]
    fn distance_is_a_scaled_pseudometric(t in table(), kind in prop_oneof![Just(SimilarityKind::Euclidean), Just(SimilarityKind::Supremum)]) {
        let config = SimilarityConfig::fit(&t, 1.0, kind, NominalCount::OneHot).unwrap();
        for i in 0..t.len() {
            prop_assert_eq!(config.distance(&t, i, &t, i), 0.0);
            for j in 0..t.len() {
                let d = config.distance(&t, i, &t, j);
                prop_assert!((d - config.distance(&t, j, &t, i)).abs() <= TOL);
                prop_assert!(d >= 0.0);
                for k in 0..t.len() {
                    prop_assert!(d <= config.distance(&t, i, &t, k) + config.distance(&t, k, &t, j) + TOL);
                }
            }
        }
    }

    #[test]
    fn approximations_sandwich_the_set(t in table(), kind in kind(), spec in triplet(), raw in prop::collection::vec(0.0f64..=1.0, 8)) {
        let config = SimilarityConfig::fit(&t, 1.0, kind, NominalCount::OneHot).unwrap();
        let matrix = relation_matrix(&t, &config).unwrap().through_isomorphism(&spec);
        let set = FuzzySet::new(raw[..t.len()].to_vec()).unwrap();
        let lower = lower_approximation(&set, &matrix, &spec, None).unwrap();
        let upper = upper_approximation(&set, &matrix, &spec, None).unwrap();
        prop_assert!(lower.is_subset_of(&set, TOL));
        prop_assert!(set.is_subset_of(&upper, TOL));
        // both approximations are granularly representable, so fixed points
        let lower_again = lower_approximation(&lower, &matrix, &spec, None).unwrap();
        let upper_again = upper_approximation(&upper, &matrix, &spec, None).unwrap();
        for (a, b) in lower.membership().iter().zip(lower_again.membership()) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
        for (a, b) in upper.membership().iter().zip(upper_again.membership()) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn fewer_neighbours_never_raise_the_objective((t, labels) in labelled(), loss in prop_oneof![Just(Loss::Mse), Just(Loss::Mae)], nn in 0.1f64..1.0) {
        let config = SimilarityConfig::fit(&t, 1.0, SimilarityKind::Euclidean, NominalCount::OneHot).unwrap();
        let matrix = relation_matrix(&t, &config).unwrap();
        let spec = TripletSpec::LUKASIEWICZ;
        let exact = solve(&assemble_multiclass(&labels, &matrix, &spec, loss, 1.0).unwrap()).unwrap();
        let reduced_problem = assemble_multiclass(&labels, &matrix, &spec, loss, nn).unwrap();
        let reduced = solve(&reduced_problem).unwrap();
        prop_assert!(reduced.objective <= exact.objective + 1e-7);
        // the exact solution is feasible for the reduced problem
        prop_assert!(reduced_problem.feasibility_residual(&exact.alpha) <= 1e-9);

        let binary: Vec<bool> = labels.iter().map(|&l| l == 0).collect();
        let exact = solve(&assemble_binary(&binary, &matrix, &spec, loss, 1.0).unwrap()).unwrap();
        let reduced = solve(&assemble_binary(&binary, &matrix, &spec, loss, nn).unwrap()).unwrap();
        prop_assert!(reduced.objective <= exact.objective + 1e-7);
    }

    #[test]
    fn swapping_binary_labels_mirrors_the_fit((t, labels) in labelled()) {
        // Â for the complement labels is N of Â for the original ones
        let config = SimilarityConfig::fit(&t, 1.0, SimilarityKind::Euclidean, NominalCount::OneHot).unwrap();
        let matrix = relation_matrix(&t, &config).unwrap();
        let spec = TripletSpec::LUKASIEWICZ;
        let pos: Vec<bool> = labels.iter().map(|&l| l == 0).collect();
        let neg: Vec<bool> = pos.iter().map(|p| !p).collect();
        let a = solve(&assemble_binary(&pos, &matrix, &spec, Loss::Mse, 1.0).unwrap()).unwrap();
        let b = solve(&assemble_binary(&neg, &matrix, &spec, Loss::Mse, 1.0).unwrap()).unwrap();
        for (x, y) in a.alpha.iter().zip(&b.alpha) {
            prop_assert!((x + y - 1.0).abs() <= 1e-7, "{} + {}", x, y);
        }
    }

    #[test]
    fn fitted_classes_are_granular_and_bounds_ordered(
        (t, labels) in labelled(),
        spec in triplet(),
        formulation in prop_oneof![Just(Formulation::Multiclass), Just(Formulation::Binary)],
        queries in table(),
    ) {
        let binary = formulation == Formulation::Binary;
        let labels: Vec<usize> = if binary { labels.iter().map(|&l| l.min(1)).collect() } else { labels };
        let config = FitConfig { triplet: spec, formulation, similarity: SimilarityKind::Supremum, ..FitConfig::default() };
        let model = classifier::fit(&t, &labels, &config).unwrap();
        let base = relation_matrix(&t, &model.similarity).unwrap().through_isomorphism(&spec);
        for membership in &model.memberships {
            prop_assert!(membership.iter().all(|m| (0.0..=1.0).contains(m)));
            let set = FuzzySet::new(membership.clone()).unwrap();
            prop_assert!(is_granularly_representable(&set, &base, &spec, 1e-7).unwrap().is_empty());
        }
        if queries.numeric_width() != t.numeric_width() {
            return Ok(());
        }
        let relation = model.query_relation(&queries).unwrap();
        for q in 0..queries.len() {
            let row = relation.row(q);
            for k in 0..model.n_classes {
                let b = model.membership_bounds(row, row, k).unwrap();
                prop_assert!(b.lower <= b.upper + TOL);
            }
        }
        let predictions = model.predict(&queries, None).unwrap();
        for p in predictions {
            prop_assert!(p.class < model.n_classes);
            prop_assert!(p.degrees.iter().all(|d| (0.0..=1.0).contains(d)));
        }
    }
}
