//! Splitting types, Chern classes and e-invariants.

use forcing::cohomology::{normalizing_number_h, PlaneCurve};
use forcing::geometry::{chern_polynomial, e_bounds, intersection_report};
use forcing::syzygy::{find_primary_relation, relation_dim, splitting_type_p1, DEFAULT_BUDGET};
use forcing::{ForcingData, GradedRing, Poly};
use proptest::prelude::*;

fn line(p: u64) -> GradedRing {
    GradedRing::from_text(p, 2, None).unwrap()
}

fn polys(ring: &GradedRing, texts: &[&str]) -> Vec<Poly> {
    texts.iter().map(|t| ring.parse(t).unwrap()).collect()
}

/// `dim Rel_k` for monomial generators in two variables by counting: the
/// ideal in degree `k` is spanned by the monomials some generator divides.
fn monomial_relation_dim(exps: &[(u32, u32)], k: i64) -> usize {
    if k < 0 {
        return 0;
    }
    let source: usize = exps
        .iter()
        .map(|(a, b)| {
            let d = (a + b) as i64;
            if k >= d { (k - d + 1) as usize } else { 0 }
        })
        .sum();
    let image = (0..=k as u32)
        .filter(|&a| {
            let b = k as u32 - a;
            exps.iter().any(|&(ea, eb)| ea <= a && eb <= b)
        })
        .count();
    source - image
}

fn split_dim(degrees: &[u32], k: i64) -> usize {
    degrees.iter().map(|&kj| (k - kj as i64 + 1).max(0) as usize).sum()
}

#[test]
fn projective_line_examples() {
    let r = line(5);
    let st = splitting_type_p1(&r, &polys(&r, &["x^2", "y^2", "x*y"]), 2).unwrap();
    assert_eq!(st.degrees, vec![3, 3]);
    assert!(st.determinant_holds(&[2, 2, 2]));
    assert_eq!(st.bundle_degrees(), vec![-1, -1]);

    let st = splitting_type_p1(&r, &polys(&r, &["x^2", "y^2", "x^2"]), 2).unwrap();
    assert_eq!(st.degrees, vec![2, 4]);
    assert!(st.determinant_holds(&[2, 2, 2]));
    assert_eq!(st.imbalance(), 2);
}

#[test]
fn splitting_type_reproduces_relation_dimensions() {
    let cases: &[&[(u32, u32)]] = &[
        &[(2, 0), (0, 2), (1, 1)],
        &[(2, 0), (0, 2), (2, 0)],
        &[(3, 0), (0, 2), (1, 1)],
        &[(4, 0), (0, 3), (2, 1), (1, 2)],
        &[(1, 0), (0, 5), (0, 1)],
    ];
    for exps in cases {
        let r = line(3);
        let gens: Vec<Poly> = exps
            .iter()
            .map(|&(a, b)| r.parse(&format!("x^{a}*y^{b}")).unwrap())
            .collect();
        let degrees: Vec<u32> = exps.iter().map(|(a, b)| a + b).collect();
        let m = *degrees.iter().max().unwrap() as i64;
        let st = splitting_type_p1(&r, &gens, m).unwrap();
        assert!(st.determinant_holds(&degrees));
        for k in 0..=degrees.iter().sum::<u32>() as i64 + 2 {
            let want = monomial_relation_dim(exps, k);
            assert_eq!(relation_dim(&r, &gens, k).unwrap(), want, "{exps:?}, k = {k}");
            assert_eq!(split_dim(&st.degrees, k), want, "{exps:?}, k = {k}");
        }
    }
}

#[test]
fn generic_forms_split_consistently() {
    let r = line(7);
    for texts in [
        &["x^2+y^2", "x*y", "x^2-3*y^2"][..],
        &["x^3+y^3", "x^2*y", "y^3+2*x*y^2"][..],
        &["x^2", "y^3", "x*y+y^2"][..],
    ] {
        let gens = polys(&r, texts);
        let degrees: Vec<u32> = gens.iter().map(|g| g.homogeneous_degree().unwrap()).collect();
        let st = splitting_type_p1(&r, &gens, 3).unwrap();
        assert!(st.determinant_holds(&degrees));
        for k in 0..12 {
            assert_eq!(relation_dim(&r, &gens, k).unwrap(), split_dim(&st.degrees, k), "{texts:?}, k = {k}");
        }
    }
}

/// Truncated product of `(1 - a_i t)` with 128-bit arithmetic.
fn truncated_product(factors: &[i64], len: usize) -> Vec<i128> {
    let mut out = vec![0i128; len];
    out[0] = 1;
    for &a in factors {
        for k in (1..len).rev() {
            out[k] -= a as i128 * out[k - 1];
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chern_times_twist_factor_is_the_product(
        e_list in prop::collection::vec(-20i64..20, 1..=5),
        m in -20i64..20,
    ) {
        let c = chern_polynomial(&e_list, m).unwrap();
        let n = e_list.len();
        prop_assert_eq!(c.len(), n);
        let mut back = vec![0i128; n];
        for k in 0..n {
            back[k] = c[k] as i128 - if k > 0 { m as i128 * c[k - 1] as i128 } else { 0 };
        }
        prop_assert_eq!(back, truncated_product(&e_list, n));
    }
}

#[test]
fn fermat_balanced_triples_have_zero_e_invariant() {
    for m in [3u32, 4] {
        let p = if m == 3 { 7 } else { 5 };
        let ring = GradedRing::from_text(p, 3, Some(&format!("x^{m}+y^{m}+z^{m}"))).unwrap();
        let curve = PlaneCurve::new(ring.clone()).unwrap();
        let mut seen = 0;
        for d1 in 1..m {
            for d2 in 1..m {
                let Some(d3) = (2 * m).checked_sub(d1 + d2) else { continue };
                if d3 == 0 || d3 >= m {
                    continue;
                }
                seen += 1;
                let data = ForcingData::from_text(
                    &ring,
                    &[&format!("x^{d1}"), &format!("y^{d2}")],
                    &format!("z^{d3}"),
                    None,
                )
                .unwrap();
                let triple = vec![data.generators()[0].clone(), data.generators()[1].clone(), data.candidate().clone()];
                let search = find_primary_relation(&ring, &triple, m, DEFAULT_BUDGET, 0).unwrap();
                let rel = search.found().expect("relation of total degree m");
                assert!(rel.relation().verify(&ring, &triple).unwrap());

                let deg_h = m as i64;
                let bounds = e_bounds(&data, deg_h, Some(rel)).unwrap();
                assert!(bounds.e.is_exact() && bounds.e.low == 0, "{d1} {d2} {d3}");
                let report = intersection_report(&data, deg_h, Some(rel)).unwrap();
                assert_eq!(report.z_top, data.leadno() * deg_h);

                let nu = normalizing_number_h(&curve, &data, Some(rel)).unwrap();
                let half = data.leadno() * deg_h / 2;
                assert_eq!((nu.nu_low, nu.nu_high), (half, half), "{d1} {d2} {d3}");
                assert_eq!(2 * nu.nu_low - report.z_top, 0);
            }
        }
        assert_eq!(seen, if m == 3 { 1 } else { 3 });
    }
}

#[test]
fn section_bounds_lie_inside_numeric_bounds() {
    let ring = GradedRing::from_text(5, 3, Some("x^4+y^4+z^4")).unwrap();
    let curve = PlaneCurve::new(ring.clone()).unwrap();
    for (gens, f0) in [
        (["x", "y"], "z^3"),
        (["x^2", "y^2"], "z^2"),
        (["x^2", "y^3"], "x*z^2"),
        (["x^3", "y^2"], "z^3"),
        (["x^2", "y^2"], "x*y"),
    ] {
        let data = ForcingData::from_text(&ring, &gens, f0, None).unwrap();
        let numeric = e_bounds(&data, 4, None).unwrap().nu;
        let sections = normalizing_number_h(&curve, &data, None).unwrap();
        assert!(sections.nu_low <= sections.nu_high, "{gens:?}; {f0}");
        assert!(numeric.contains(sections.nu_low), "{gens:?}; {f0}: {numeric:?} vs {sections:?}");
    }
}
