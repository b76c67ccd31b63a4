use std::fs;

use universal_sharing::bounds::{
    certificate_bound, check_certificate, entropy_lp, export_lp, format_solution, load_solution, log_bound_holds,
    parse_lp, polymatroid_lp, reduce_with, simplex_solve, solve_exact, solve_float, solve_guided,
    stored_reduced_solution, symmetry_reduce, universal_lower_bound, verify_dual_certificate, Certificate, Family,
    SolutionFile, SolveMethod, SymmetryGroup, SOLUTION_TOLERANCE,
};
use universal_sharing::complexity::sigma_upper;
use universal_sharing::structures::{
    independent_sequence_structure, subset_of, theorem7_structure, universal_normalized, AccessStructure,
};
use universal_sharing::{CertCondition, Error, Rational};

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

#[test]
fn model_families_for_u3() {
    let model = entropy_lp(&universal_normalized(3).unwrap()).unwrap();
    assert_eq!(model.num_vars(), (1 << 7) + 1);
    let counts: Vec<(Family, usize)> = model.family_counts();
    let get = |f: Family| counts.iter().find(|(g, _)| *g == f).map_or(0, |(_, c)| *c);
    assert_eq!(get(Family::Monotonicity), 7);
    // pairs of the 7 ground elements times subsets of the other 5
    assert_eq!(get(Family::Submodularity), 21 * 32);
    assert_eq!(get(Family::Normalization), 2);
    assert_eq!(get(Family::Qualified) + get(Family::Independent), 63);
    assert_eq!(get(Family::Objective), 6);
}

#[test]
fn lp_optima_small() {
    let u2 = universal_normalized(2).unwrap();
    let sol = solve_exact(&entropy_lp(&u2).unwrap()).unwrap();
    assert_eq!(sol.value, r(1, 1));
    assert_eq!(sol.method, SolveMethod::Simplex);
}

#[test]
fn reduction_preserves_optimum() {
    for n in 2..=3 {
        let s = universal_normalized(n).unwrap();
        let model = entropy_lp(&s).unwrap();
        let red = symmetry_reduce(&model, &s).unwrap();
        assert!(red.model.num_vars() < model.num_vars());
        let full = simplex_solve(&model).unwrap();
        let reduced = simplex_solve(&red.model).unwrap();
        assert_eq!(full.value, reduced.value);
        // lifted certificate and lifted point both check on the full model
        let lifted = red.lift_dual(&model, &reduced.dual).unwrap();
        assert_eq!(verify_dual_certificate(&model, &lifted).unwrap(), full.value);
        let x = red.lift_primal(reduced.primal.as_ref().unwrap());
        assert_eq!(universal_sharing::bounds::verify_primal(&model, &x).unwrap(), full.value);
    }
}

#[test]
fn trivial_group_changes_nothing() {
    let s = universal_normalized(2).unwrap();
    let model = entropy_lp(&s).unwrap();
    let red = reduce_with(&model, 2, SymmetryGroup::trivial(2)).unwrap();
    assert_eq!(red.model.num_vars(), model.num_vars());
    assert_eq!(red.model.num_rows(), model.num_rows());
    assert_eq!(simplex_solve(&red.model).unwrap().value, simplex_solve(&model).unwrap().value);
}

#[test]
fn symmetry_group_of_u3() {
    let g = SymmetryGroup::for_structure(&universal_normalized(3).unwrap()).unwrap();
    assert_eq!(g.order(), 6);
    assert!(SymmetryGroup::trivial(5).is_trivial());
}

#[test]
fn degenerate_model_has_zero_optimum() {
    let sol = solve_exact(&polymatroid_lp(3).unwrap()).unwrap();
    assert_eq!(sol.value, r(0, 1));
    assert!(matches!(polymatroid_lp(0), Err(Error::EmptyInput)));
}

#[test]
fn guided_path_agrees_with_simplex() {
    let s = universal_normalized(3).unwrap();
    let model = entropy_lp(&s).unwrap();
    let red = symmetry_reduce(&model, &s).unwrap();
    let guided = solve_guided(&red.model).unwrap();
    assert_eq!(guided.method, SolveMethod::GuidedInteriorPoint);
    assert_eq!(guided.value, simplex_solve(&red.model).unwrap().value);
    assert_eq!(verify_dual_certificate(&red.model, &guided.dual).unwrap(), r(3, 2));
}

#[test]
fn tampered_certificates_are_rejected() {
    let model = entropy_lp(&universal_normalized(2).unwrap()).unwrap();
    let sol = simplex_solve(&model).unwrap();
    let mut bad = sol.dual.clone();
    bad.bound = r(2, 1);
    assert!(verify_dual_certificate(&model, &bad).is_err());
    let mut bad = sol.dual.clone();
    bad.multipliers[0].1 += r(1, 2);
    assert!(verify_dual_certificate(&model, &bad).is_err());
    let mut bad = sol.dual;
    bad.multipliers.push((0, r(-1, 1)));
    assert!(verify_dual_certificate(&model, &bad).is_err());
}

#[test]
fn stored_u4_solution_checks() {
    let s = universal_normalized(4).unwrap();
    let model = entropy_lp(&s).unwrap();
    let red = symmetry_reduce(&model, &s).unwrap();
    let text = stored_reduced_solution(4).unwrap();
    let sol = SolutionFile::load(text, &red.model).unwrap();
    assert_eq!(sol.value, r(7, 4));
    let lifted = red.lift_dual(&model, &sol.dual).unwrap();
    assert_eq!(verify_dual_certificate(&model, &lifted).unwrap(), r(7, 4));
    let corrupted = text.replacen("\"value\":\"7/4\"", "\"value\":\"2\"", 1);
    assert!(SolutionFile::load(&corrupted, &red.model).is_err());
    assert!(stored_reduced_solution(3).is_none());
}

#[test]
fn lp_file_round_trip_u4() {
    let model = entropy_lp(&universal_normalized(4).unwrap()).unwrap();
    assert_eq!(model.num_vars(), (1 << 15) + 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u4.lp");
    export_lp(&model, &path).unwrap();
    let parsed = parse_lp(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed.num_vars(), model.num_vars());
    assert_eq!(parsed.num_rows(), model.num_rows());
    assert!(parsed == model);
}

#[test]
fn external_solution_for_u3() {
    let model = entropy_lp(&universal_normalized(3).unwrap()).unwrap();
    let float = solve_float(&model).unwrap();
    let loaded = load_solution(&model, &format_solution(&model, &float.x)).unwrap();
    assert!((loaded.objective - 1.5).abs() < 1e-6);
    assert!(loaded.conservative_bound() <= 1.5);
    assert!(loaded.max_violation <= SOLUTION_TOLERANCE);
}

#[test]
fn empty_structure_is_rejected() {
    assert!(matches!(AccessStructure::new(3, &[]), Err(Error::EmptyInput)));
}

#[test]
fn certificate_examples() {
    let s = AccessStructure::new(4, &[subset_of([0, 2]), subset_of([1, 2, 3]), subset_of([0, 1])]).unwrap();
    let good = Certificate::new(subset_of([0, 1]), vec![2, 3], vec![subset_of([0]), subset_of([1])]);
    assert_eq!(check_certificate(&s, &good).unwrap(), 2);
    assert_eq!(certificate_bound(&s, &good).unwrap(), r(1, 1));

    let not_contained = Certificate::new(subset_of([0, 1]), vec![2], vec![subset_of([3])]);
    assert!(matches!(
        check_certificate(&s, &not_contained),
        Err(Error::InvalidCertificate { condition: CertCondition::Containment, index: 0 })
    ));
    let qualified_start = Certificate::new(subset_of([0, 1]), vec![2, 3], vec![subset_of([0]), subset_of([0, 1])]);
    assert!(matches!(
        check_certificate(&s, &qualified_start),
        Err(Error::InvalidCertificate { condition: CertCondition::Independence, index: 1 })
    ));
    let json = good.to_json();
    assert_eq!(Certificate::from_json(&json).unwrap(), good);
}

#[test]
fn classical_certificates_have_unqualified_base() {
    for n in 2..=64 {
        let (s, cert) = theorem7_structure(n).unwrap();
        assert!(!s.is_qualified(cert.a0), "n={n}");
        assert!(matches!(
            check_certificate(&s, &cert),
            Err(Error::InvalidCertificate { condition: CertCondition::BaseQualified, .. })
        ));
    }
}

#[test]
fn the_n3_classical_structure_is_ideal() {
    // minimal sets {b1 a1}, {b1 b2 a2}, {b1 b2 b3} with a1 = 0, a2 = 1, b_i = i + 1
    use universal_sharing::gf2::BitMatrix;
    use universal_sharing::schemes::{verify_perfect, LinearScheme, SeedBlock};
    let (s, _) = theorem7_structure(3).unwrap();
    // seed (u, v, r): secret u ⊕ v; a1 ← v, a2 ← v ⊕ r, b1 ← u, b2 ← r, b3 ← v ⊕ r
    let secret = BitMatrix::parse_rows(3, &["110"]).unwrap();
    let shares = ["010", "011", "100", "001", "011"].map(|row| BitMatrix::parse_rows(3, &[row]).unwrap()).to_vec();
    let scheme = LinearScheme::new(secret, shares, vec![SeedBlock::new("seed", 0, 3)]).unwrap();
    assert!(verify_perfect(&scheme, &s).unwrap().is_perfect());
    assert_eq!(scheme.complexity(), r(1, 1));
}

#[test]
fn qualified_base_certificates() {
    for n in 2..=64 {
        let (s, cert) = independent_sequence_structure(n).unwrap();
        assert_eq!(s.num_minimal(), n);
        let k = cert.a0.count_ones() as i64;
        assert_eq!(certificate_bound(&s, &cert).unwrap(), r(n as i64 - 1, k));
    }
}

#[test]
fn k_minimality() {
    use universal_sharing::structures::theorem7_k;
    assert_eq!(theorem7_k(3), 2);
    assert_eq!(theorem7_k(5), 3);
    assert_eq!(theorem7_k(8), 4);
    assert_eq!(theorem7_k(64), 7);
    assert!(log_bound_holds(64, &r(64, 7)));
}

#[test]
fn universal_lower_bounds() {
    let two = universal_lower_bound(2).unwrap();
    assert_eq!(two.lower_bound, Some(r(1, 1)));
    assert_eq!(two.upper_bound, Some(r(1, 1)));
    let three = universal_lower_bound(3).unwrap();
    assert_eq!(three.lower_bound, Some(r(3, 2)));
    let four = universal_lower_bound(4).unwrap();
    assert_eq!(four.lower_bound, Some(r(7, 4)));
    assert_eq!(four.upper_bound, Some(r(11, 6)));
    assert!(four.notes.iter().any(|n| n.contains("[7/4, 11/6]")));
    let json = four.to_json();
    assert!(json.contains("\"lower_bound\": \"7/4\""));
    for n in [2usize, 3, 4, 5, 10, 64] {
        let rep = universal_lower_bound(n).unwrap();
        let lower = rep.lower_bound.clone().unwrap();
        assert!(lower <= sigma_upper(n).unwrap().0);
        if let (Some(c), Some(lp)) = (&rep.certificate_bound, rep.lp_bound.as_ref().and_then(|l| l.exact.clone())) {
            assert!(*c <= lp);
        }
    }
}
