use forcing::cohomology::{h1_basis, h_line, mult_map_h1, negative_basis, PlaneCurve};
use forcing::GradedRing;

fn fermat(p: u64, d: u32) -> PlaneCurve {
    PlaneCurve::new(GradedRing::from_text(p, 3, Some(&format!("x^{d}+y^{d}+z^{d}"))).unwrap()).unwrap()
}

#[test]
fn riemann_roch() {
    for d in [3i64, 4, 5] {
        let curve = fermat(7, d as u32);
        let genus = (d - 1) * (d - 2) / 2;
        assert_eq!(curve.genus() as i64, genus);
        for n in -3..=2 * d {
            let (h0, h1) = h_line(&curve, n);
            assert_eq!(h0 as i64 - h1 as i64, n * d - genus + 1, "d = {d}, n = {n}");
        }
    }
}

#[test]
fn h1_agrees_with_the_kernel_of_the_relation() {
    for (p, rel) in [(7, "x^3+y^3+z^3"), (5, "x^4-y^4+z^4+x*z^3+y*z^3"), (3, "x^5+y^5+z^5")] {
        let curve = PlaneCurve::new(GradedRing::from_text(p, 3, Some(rel)).unwrap()).unwrap();
        let d = curve.degree() as i64;
        for n in -3..=2 * d {
            assert_eq!(h1_basis(&curve, n).unwrap().len(), h_line(&curve, n).1, "{rel}, n = {n}");
        }
        // Serre duality: h1(n) = h0(d - 3 - n).
        for n in -3..=2 * d {
            assert_eq!(h_line(&curve, n).1, h_line(&curve, d - 3 - n).0, "{rel}, n = {n}");
        }
    }
}

#[test]
fn negative_basis_size() {
    for s in 0..10i64 {
        let want = if s < 3 { 0 } else { ((s - 1) * (s - 2) / 2) as usize };
        assert_eq!(negative_basis(s).len(), want);
    }
}

#[test]
fn multiplication_is_functorial() {
    let curve = fermat(7, 4);
    let ring = curve.ring();
    let (f, g) = (ring.parse("x+2*y").unwrap(), ring.parse("y*z-x^2").unwrap());
    for n in -4..0 {
        let mf = mult_map_h1(&curve, &f, n).unwrap();
        let mg = mult_map_h1(&curve, &g, n + 1).unwrap();
        let mfg = mult_map_h1(&curve, &f.mul(&g), n).unwrap();
        assert_eq!(mg.matrix.mul(&mf.matrix), mfg.matrix, "n = {n}");
        let doubled = mult_map_h1(&curve, &f.mul(&g).scale(2), n).unwrap().matrix;
        for i in 0..doubled.rows() {
            for j in 0..doubled.cols() {
                assert_eq!(doubled.get(i, j), ring.field().mul(2, mfg.matrix.get(i, j)));
            }
        }
    }
}

#[test]
fn h1_kernel_is_preserved() {
    // Multiplication preserves the kernel of F, so H^1 maps into H^1.
    let curve = fermat(5, 4);
    let ring = curve.ring();
    let f = ring.parse("x*y+z^2").unwrap();
    for n in -4..1 {
        let m = mult_map_h1(&curve, &f, n).unwrap();
        let rel_next = forcing::cohomology::negative_mult_matrix(ring.relation().unwrap(), 4 - n - 2).unwrap();
        for v in h1_basis(&curve, n).unwrap() {
            let image = m.matrix.apply(&v);
            assert!(rel_next.apply(&image).iter().all(|c| *c == 0));
        }
    }
}
