use std::sync::Arc;

use mapscheme::basis_algebra::{BasisAlgebra, BasisHopfAlgebra, FiniteGroup};
use mapscheme::cli::parse_spec;
use mapscheme::exact_algebra::{FieldSpec, GroebnerBasis, Lin, NCPolynomial, Presentation, Word};
use mapscheme::hopf_hom::{enumerate_hopf_points, PresentedHopf};
use mapscheme::mapping_core::{
    build_mapping_tower, enumerate_points, morphism_to_point, point_to_morphism, EnumOptions,
};
use num_integer::Integer;
use proptest::prelude::*;

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::Prime(2)),
        Just(FieldSpec::Prime(3)),
        Just(FieldSpec::Prime(5)),
        Just(FieldSpec::Prime(7)),
    ]
}

/// Polynomials on generators `0..gens` with words of length at most `len`.
fn poly(f: FieldSpec, gens: u32, len: usize) -> impl Strategy<Value = NCPolynomial> {
    let term = (prop::collection::vec(0..gens, 0..=len), -4i64..=4);
    prop::collection::vec(term, 0..5)
        .prop_map(move |ts| Lin::from_terms(f, ts.into_iter().map(|(w, c)| (Word(w), f.from_int(c)))))
}

fn field_and_polys(n: usize) -> impl Strategy<Value = (FieldSpec, Vec<NCPolynomial>)> {
    field().prop_flat_map(move |f| (Just(f), prop::collection::vec(poly(f, 2, 3), n)))
}

proptest! {
    #[test]
    fn nonzero_scalars_are_invertible(f in field(), n in -50i64..50) {
        let a = f.from_int(n);
        match f.inv(&a) {
            Some(b) => prop_assert!(f.is_one(&f.mul(&a, &b))),
            None => prop_assert!(f.is_zero(&a)),
        }
    }

    #[test]
    fn multiplication_distributes(f in field(), a in -20i64..20, b in -20i64..20, c in -20i64..20) {
        let (a, b, c) = (f.from_int(a), f.from_int(b), f.from_int(c));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
    }

    #[test]
    fn linear_combinations_form_a_group((_f, ps) in field_and_polys(3)) {
        let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
        prop_assert_eq!(p.add(q), q.add(p));
        prop_assert_eq!(p.add(q).add(r), p.add(&q.add(r)));
        prop_assert!(p.sub(p).is_zero());
        prop_assert_eq!(p.add(&p.neg()), p.sub(p));
    }

    #[test]
    fn products_are_associative_and_reverse((_f, ps) in field_and_polys(3)) {
        let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
        prop_assert_eq!(p.mul(q).mul(r), p.mul(&q.mul(r)));
        prop_assert_eq!(p.mul(q).reversed(), q.reversed().mul(&p.reversed()));
        prop_assert_eq!(p.mul(&q.add(r)), p.mul(q).add(&p.mul(r)));
    }

    #[test]
    fn rendered_polynomials_parse_back((f, ps) in field_and_polys(1)) {
        let pres = Presentation::free("P", f, &["a", "b"]);
        let text = pres.render_poly(&ps[0]);
        prop_assert_eq!(pres.poly(&text).unwrap(), ps[0].clone());
    }

    #[test]
    fn rendered_specs_are_fixed_points((f, ps) in field_and_polys(2)) {
        let pres = Presentation::free("P", f, &["a", "b"]);
        let rels: Vec<String> = ps.iter().filter(|p| !p.is_zero()).map(|p| pres.render_poly(p)).collect();
        let text = format!("field {f};\npresentation P {{ gens: a, b; rels: {}; }}\n", rels.join(", "));
        let spec = parse_spec(&text).unwrap();
        let again = parse_spec(&spec.render()).unwrap();
        prop_assert_eq!(&again, &spec);
        prop_assert_eq!(again.render(), spec.render());
    }

    #[test]
    fn complete_reduction_is_a_linear_projection((f, ps) in field_and_polys(2)) {
        let pres = Presentation::parse("Q", f, "a,b", &["b*a - a*b", "a*a*a - 1"]).unwrap();
        let gb = GroebnerBasis::compute(&pres, 8).unwrap();
        prop_assert!(gb.is_complete());
        let (p, q) = (&ps[0], &ps[1]);
        let rp = gb.reduce(p);
        prop_assert_eq!(gb.reduce(&rp), rp.clone());
        prop_assert_eq!(gb.reduce(&p.add(q)), rp.add(&gb.reduce(q)));
        for rel in pres.relations() {
            prop_assert!(gb.reduce(&p.mul(rel).mul(q)).is_zero());
        }
    }

    #[test]
    fn cyclic_homomorphisms_count_gcd(m in 1usize..7, n in 1usize..7) {
        let g = FiniteGroup::cyclic(m).unwrap();
        let h = FiniteGroup::cyclic(n).unwrap();
        prop_assert_eq!(g.homomorphisms_to(&h).len(), m.gcd(&n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Over `F_13`, which contains all roots of unity of order dividing 12, Hopf maps
    /// `K[Z_m] -> K[Z_n]` correspond to the `gcd(m, n)` group homomorphisms.
    #[test]
    fn hom_scheme_points_count_gcd(m in 1usize..5, n in 1usize..5) {
        let f = FieldSpec::Prime(13);
        let h1 = PresentedHopf::cyclic("C", f, m, "g").unwrap();
        let h2 = BasisHopfAlgebra::group_algebra("Z", f, FiniteGroup::cyclic(n).unwrap());
        let l = h2.algebra().basis().unwrap();
        let r = enumerate_hopf_points(&h1, &h2, &l, &EnumOptions::default()).unwrap();
        prop_assert_eq!(r.points.len(), m.gcd(&n));
        prop_assert_eq!(r.bijection(), Some(true));
    }

    #[test]
    fn points_survive_the_morphism_round_trip(p in prop::sample::select(vec![2u64, 3, 5]), level in 0usize..3) {
        let f = FieldSpec::Prime(p);
        let b = Arc::new(Presentation::parse("GL1", f, "t,s", &["t*s - 1", "s*t - 1"]).unwrap());
        let c = Arc::new(BasisAlgebra::polynomial("PolyX", f, &["x"]));
        let t = build_mapping_tower(b, c, level).unwrap();
        let ma = t.level(level).unwrap();
        for pt in enumerate_points(&ma.presentation, &EnumOptions::default()).unwrap() {
            let images = point_to_morphism(ma, &pt).unwrap();
            let back = morphism_to_point(&t, &images).unwrap().lift(&t.tower, level).unwrap();
            prop_assert_eq!(back.assignment, pt);
        }
    }
}
