use num_rational::BigRational;
use proptest::prelude::*;
use specfact_core::*;

fn tower() -> FieldRef {
    parse_descriptor("Q(sqrt 5)(sqrt (3-s1))").unwrap()
}

fn gaussian_tower() -> FieldRef {
    parse_descriptor("Q(sqrt 2)(i)").unwrap()
}

fn element(field: &FieldRef, coords: &[(i64, i64)]) -> FieldElement {
    let cs = (0..field.degree())
        .map(|k| {
            let (n, d) = coords[k % coords.len()];
            BigRational::new(n.into(), d.into())
        })
        .collect();
    FieldElement::from_coords(field, cs)
}

fn coords() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=7), 4)
}

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-9i64..=9, 1i64..=6)
}

/// A rational point with `|a| <= 4/5`.
fn disk_point() -> impl Strategy<Value = (i64, i64)> {
    (2i64..=9).prop_flat_map(|d| ((-(4 * d) / 5)..=(4 * d) / 5, Just(d)))
}

fn poly(field: &FieldRef, cs: &[(i64, i64)]) -> Poly {
    Poly::new(
        field,
        cs.iter().map(|&(n, d)| field.from_ratio(n, d)).collect(),
    )
}

fn ratfn(field: &FieldRef, num: &[(i64, i64)], den: &[(i64, i64)]) -> Option<RationalFn> {
    RationalFn::new(poly(field, num), poly(field, den)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(x in coords(), y in coords(), w in coords()) {
        for f in [tower(), gaussian_tower()] {
            let (a, b, c) = (element(&f, &x), element(&f, &y), element(&f, &w));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        }
    }

    #[test]
    fn sign_is_multiplicative(x in coords(), y in coords()) {
        let f = tower();
        let (a, b) = (element(&f, &x), element(&f, &y));
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!((&a * &b).sign_real().unwrap(), a.sign_real().unwrap() * b.sign_real().unwrap());
        }
    }

    #[test]
    fn tilde_is_an_involutive_homomorphism(
        n1 in prop::collection::vec(small_rational(), 1..4),
        d1 in prop::collection::vec(small_rational(), 1..4),
        n2 in prop::collection::vec(small_rational(), 1..4),
        d2 in prop::collection::vec(small_rational(), 1..4),
    ) {
        let q = FieldDescriptor::rational();
        if let (Some(f), Some(g)) = (ratfn(&q, &n1, &d1), ratfn(&q, &n2, &d2)) {
            prop_assert_eq!(f.tilde().tilde(), f.clone());
            prop_assert_eq!(f.mul(&g).tilde(), f.tilde().mul(&g.tilde()));
            prop_assert_eq!(f.add(&g).tilde(), f.tilde().add(&g.tilde()));
        }
    }

    #[test]
    fn tilde_is_conjugation_on_the_circle(
        n in prop::collection::vec(small_rational(), 1..4),
        d in prop::collection::vec(small_rational(), 1..4),
        im in prop::collection::vec(small_rational(), 1..4),
    ) {
        let g = FieldDescriptor::rational().extend_gaussian().unwrap();
        let i = g.imag_unit().unwrap();
        let num = poly(&g, &n).add(&poly(&g, &im).scale(&i));
        let Ok(f) = RationalFn::new(num, poly(&g, &d)) else { return Ok(()) };
        for (x, y, r) in [(3, 4, 5), (-5, 12, 13), (8, -15, 17)] {
            let z = &g.from_ratio(x, r) + &(&g.from_ratio(y, r) * &i);
            if let (Ok(a), Ok(b)) = (f.tilde().eval(&z), f.eval(&z)) {
                prop_assert_eq!(a, b.conj());
            }
        }
    }

    #[test]
    fn split_reconstructs(
        plus_num in prop::collection::vec(small_rational(), 1..4),
        a in disk_point(),
        coeffs in prop::collection::vec(small_rational(), 1..4),
    ) {
        let q = FieldDescriptor::rational();
        let pole = q.from_ratio(a.0, a.1);
        let mut cs: Vec<FieldElement> = coeffs.iter().map(|&(n, d)| q.from_ratio(n, d)).collect();
        if cs.last().unwrap().is_zero() {
            *cs.last_mut().unwrap() = q.one();
        }
        let order = cs.len();
        // an R+ part with a pole at 2 plus a principal part at the disk point
        let plus = RationalFn::new(poly(&q, &plus_num), poly(&q, &[(-2, 1), (1, 1)])).unwrap();
        let minus = PartialFraction::from_terms(Poly::zero(&q), vec![PoleTerm { pole: pole.clone(), coeffs: cs }]).unwrap();
        let f = plus.add(&pf_to_ratfn(&minus));
        let (p, m) = split_plus_minus(&f, &[PoleSpec::new(pole.clone(), order).unwrap()]).unwrap();
        prop_assert_eq!(p.add(&pf_to_ratfn(&m)), f.clone());
        prop_assert_eq!(m, minus);
        prop_assert_eq!(p, plus);
        let back = ratfn_to_pf(&f, &[pole, q.from_int(2)]).unwrap();
        prop_assert_eq!(pf_to_ratfn(&back), f);
    }

    #[test]
    fn taylor_matches_principal_parts(
        num in prop::collection::vec(small_rational(), 1..4),
        den in prop::collection::vec(small_rational(), 1..4),
        a in disk_point(),
    ) {
        let q = FieldDescriptor::rational();
        let Some(f) = ratfn(&q, &num, &den) else { return Ok(()) };
        let a = q.from_ratio(a.0, a.1);
        let Ok(t) = f.taylor_coeffs(&a, 4) else { return Ok(()) };
        for (k, c) in t.iter().enumerate() {
            let shifted = f.div(&RationalFn::from_poly(Poly::linear_root(&a).pow(k + 1))).unwrap();
            prop_assert_eq!(&shifted.principal_part(&a, k + 1).unwrap()[0], c);
        }
    }

    #[test]
    fn transfer_matches_series_division(
        a in disk_point(),
        b in disk_point(),
        rows in 1usize..=5,
        coeffs in prop::collection::vec(small_rational(), 1..=5),
    ) {
        let q = FieldDescriptor::rational();
        let (a, b) = (q.from_ratio(a.0, a.1), q.from_ratio(b.0, b.1));
        let cs: Vec<FieldElement> = coeffs.iter().map(|&(n, d)| q.from_ratio(n, d)).collect();
        let t = transfer_matrix(&a, &b, rows, cs.len()).unwrap();
        prop_assert_eq!(&t, &transfer_matrix(&a, &b, rows, cs.len()).unwrap());
        let conj: Vec<FieldElement> = cs.iter().map(FieldElement::conj).collect();
        let got = apply_transfer(&t, &conj).unwrap();
        let pf = PartialFraction { entire: Poly::zero(&q), terms: vec![PoleTerm { pole: b, coeffs: cs }] };
        let oracle = pf_to_ratfn(&pf).tilde().taylor_coeffs(&a, rows).unwrap();
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn series_powers_multiply(
        base in prop::collection::vec(small_rational(), 1..5),
        l1 in 0usize..4,
        l2 in 0usize..4,
    ) {
        let q = FieldDescriptor::rational();
        let s: Vec<FieldElement> = base.iter().map(|&(n, d)| q.from_ratio(n, d)).collect();
        let count = 6;
        let x = series_power(&s, l1, count, &q);
        let y = series_power(&s, l2, count, &q);
        let xy: Vec<FieldElement> = (0..count)
            .map(|k| (0..=k).fold(q.zero(), |acc, j| &acc + &(&x[j] * &y[k - j])))
            .collect();
        prop_assert_eq!(series_power(&s, l1 + l2, count, &q), xy);
    }

    #[test]
    fn determinant_by_interpolation(
        entries in prop::collection::vec((prop::collection::vec(small_rational(), 1..3), prop::collection::vec(small_rational(), 1..3)), 9),
    ) {
        let q = FieldDescriptor::rational();
        let fs: Option<Vec<RationalFn>> = entries.iter().map(|(n, d)| ratfn(&q, n, d)).collect();
        let Some(fs) = fs else { return Ok(()) };
        let rows: Vec<Vec<RationalFn>> = fs.chunks(3).map(<[RationalFn]>::to_vec).collect();
        let m = RatMatrix::new(&q, rows.clone()).unwrap();
        let by_elimination = linalg::det(&rows, &RationalFn::one(&q)).unwrap();
        prop_assert_eq!(m.det().unwrap(), by_elimination);
    }
}

#[test]
fn roots_square_to_radicands() {
    for f in [tower(), gaussian_tower()] {
        for k in 1..=f.levels() {
            assert_eq!(f.root(k).pow(2), f.radicand(k));
        }
    }
}
