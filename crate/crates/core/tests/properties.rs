mod support;

use latval_core::ball::{BallContext, BallGroup};
use latval_core::field::series::artin_schreier_root;
use latval_core::field::{
    parse_element, rat, Field, FunctionField, Poly, PrimeField, RatFunc, Rationals, TruncatedSeries,
};
use latval_core::gen::generate;
use latval_core::grid::GridRelation;
use latval_core::lattice::{bottom_rank, is_independent, reduced_rank, FiniteLattice};
use latval_core::valuation::{parse_places, IntersectionRing, Val, ValuedField};
use num_rational::BigRational;
use proptest::prelude::*;

use support::{artin_schreier_image, max_grid_brute, padic, val_at, Point, Tables};

fn qt() -> FunctionField<Rationals> {
    FunctionField::new(Rationals, "t")
}

fn poly_q() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-5i64..=5, 1i64..=3), 0..4)
        .prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}

fn elem_q() -> impl Strategy<Value = RatFunc<BigRational>> {
    (poly_q(), poly_q()).prop_filter_map("zero denominator", |(n, d)| {
        let f = qt();
        let den = Poly::from_coeffs(&Rationals, d);
        if den.is_zero() {
            return None;
        }
        f.fraction(Poly::from_coeffs(&Rationals, n), den).ok()
    })
}

fn elem_f3() -> impl Strategy<Value = RatFunc<u64>> {
    (
        prop::collection::vec(0u64..3, 0..5),
        prop::collection::vec(0u64..3, 1..5),
    )
        .prop_filter_map("zero denominator", |(n, d)| {
            let k = PrimeField::new(3).unwrap();
            let f = FunctionField::new(k, "t");
            let den = Poly::from_coeffs(&k, d);
            if den.is_zero() {
                return None;
            }
            f.fraction(Poly::from_coeffs(&k, n), den).ok()
        })
}

fn canonical<K: Field>(k: &K, x: &RatFunc<K::Elem>) -> bool {
    x.den().is_monic(k)
        && x.num().gcd(k, x.den()).is_one(k)
        && (!x.num().is_zero() || x.den().is_one(k))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (-200i64..=200, 1i64..=200).prop_filter_map("zero", |(n, d)| (n != 0).then(|| rat(n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn function_field_arithmetic_is_canonical(a in elem_q(), b in elem_q(), c in elem_q()) {
        let f = qt();
        let k = Rationals;
        let sum = f.add(&a, &b);
        let prod = f.mul(&a, &b);
        prop_assert!(canonical(&k, &sum) && canonical(&k, &prod));
        prop_assert_eq!(&sum, &f.add(&b, &a));
        prop_assert_eq!(&prod, &f.mul(&b, &a));
        prop_assert_eq!(f.mul(&f.add(&a, &b), &c), f.add(&f.mul(&a, &c), &f.mul(&b, &c)));
        prop_assert_eq!(f.add(&sum, &c), f.add(&a, &f.add(&b, &c)));
        // the cross-multiplied fraction, reduced from scratch
        let direct = f.fraction(
            a.num().mul(&k, b.num()),
            a.den().mul(&k, b.den()),
        ).unwrap();
        prop_assert_eq!(&prod, &direct);
        if !f.is_zero(&a) {
            prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
        prop_assert!(f.is_zero(&f.sub(&a, &a)));
    }

    #[test]
    fn printing_round_trips(a in elem_q(), b in elem_f3()) {
        let f = qt();
        prop_assert_eq!(parse_element(&f, &f.format(&a)).unwrap(), a);
        let g = FunctionField::new(PrimeField::new(3).unwrap(), "t");
        prop_assert_eq!(parse_element(&g, &g.format(&b)).unwrap(), b);
    }

    #[test]
    fn valuations_match_coefficients(a in elem_f3(), b in elem_f3(), c in 0u64..3) {
        let k = PrimeField::new(3).unwrap();
        let f = FunctionField::new(k, "t");
        let place = format!("t-{c}");
        let places = parse_places(&f, &format!("{place},inf")).unwrap();
        let pts = [Point::At(c), Point::Infinity];
        for (p, pt) in places.iter().zip(&pts) {
            prop_assert_eq!(f.val(p, &a), val_at(&k, &a, pt));
            let (va, vb) = (f.val(p, &a), f.val(p, &b));
            prop_assert_eq!(f.val(p, &f.mul(&a, &b)), va + vb);
            let vs = f.val(p, &f.add(&a, &b));
            prop_assert!(vs >= va.min(vb));
            if va != vb {
                prop_assert_eq!(vs, va.min(vb));
            }
        }
    }

    #[test]
    fn padic_valuations(x in nonzero_rational(), y in nonzero_rational()) {
        for p in [2u64, 3, 5] {
            prop_assert_eq!(Rationals.val(&p, &x), padic(p, &x));
            prop_assert_eq!(Rationals.val(&p, &(&x * &y)), padic(p, &x) + padic(p, &y));
        }
    }

    #[test]
    fn bezout_in_q23(x in nonzero_rational(), y in nonzero_rational()) {
        let r = IntersectionRing::new(Rationals, vec![2, 3]).unwrap();
        let strip = |v: &BigRational| {
            // drop 2 and 3 from the denominator so the element lands in R
            let mut d = v.denom().clone();
            for p in [2, 3] {
                while &d % p == 0.into() {
                    d /= p;
                }
            }
            BigRational::new(v.numer().clone(), d)
        };
        let (x, y) = (strip(&x), strip(&y));
        let b = r.bezout_gcd(&x, &y).unwrap();
        prop_assert_eq!(&b.r * &x + &b.s * &y, b.g.clone());
        for p in [2u64, 3] {
            prop_assert_eq!(padic(p, &b.g), padic(p, &x).min(padic(p, &y)));
            prop_assert!(padic(p, &b.r).is_nonneg() && padic(p, &b.s).is_nonneg());
        }
    }

    #[test]
    fn artin_schreier_roots(p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 1usize..40, seed in prop::collection::vec(0u64..7, 40)) {
        let k = PrimeField::new(p).unwrap();
        let mut coeffs: Vec<u64> = seed.iter().take(n).map(|c| c % p).collect();
        coeffs[0] = 0;
        let x = TruncatedSeries::new(k, coeffs.clone(), n);
        let y = artin_schreier_root(&x).unwrap();
        prop_assert_eq!(artin_schreier_image(p, y.coeffs(), n), coeffs);
    }

    #[test]
    fn nonzero_constant_terms_have_no_root(p in prop::sample::select(vec![2u64, 3, 5]), c in 1u64..5) {
        let k = PrimeField::new(p).unwrap();
        let x = TruncatedSeries::new(k, vec![c % p], 4);
        if c % p != 0 {
            // the residue equation y^p - y = c has no solution in F_p
            prop_assert!(artin_schreier_root(&x).is_err());
        }
    }

    #[test]
    fn max_grid_matches_brute_force(
        sizes in prop::collection::vec(1usize..=4, 1..=3),
        bits in prop::collection::vec(any::<bool>(), 64),
    ) {
        let mut i = 0;
        let y = GridRelation::from_fn(&sizes, |_| {
            i += 1;
            bits[(i - 1) % bits.len()]
        }).unwrap();
        let g = y.max_grid();
        prop_assert_eq!(g.m, max_grid_brute(&y));
        prop_assert!(y.contains_grid(&g.sets));
        prop_assert!(y.grid_of_size(g.m + 1).is_none());
    }

    #[test]
    fn grid_json_round_trips(sizes in prop::collection::vec(1usize..=3, 1..=3), bits in prop::collection::vec(any::<bool>(), 27)) {
        let mut i = 0;
        let y = GridRelation::from_fn(&sizes, |_| {
            i += 1;
            bits[i - 1]
        }).unwrap();
        let back = GridRelation::from_json(&y.to_json()).unwrap();
        prop_assert_eq!(back.tuples(), y.tuples());
        prop_assert_eq!(back.max_grid().m, y.max_grid().m);
    }

    #[test]
    fn product_ranks(lengths in prop::collection::vec(0usize..=3, 1..=3)) {
        let spec = format!("product:lengths={}", lengths.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","));
        let l = generate(&spec).unwrap().lattice;
        let positive = lengths.iter().filter(|&&x| x > 0).count() as u32;
        let r0 = reduced_rank(&l, l.top(), l.bot()).unwrap().rank;
        let rb = bottom_rank(&l, l.top(), l.bot()).unwrap().rank;
        prop_assert_eq!(r0, positive);
        prop_assert_eq!(rb, positive);
        prop_assert!(Tables::new(&l).is_modular());
    }

    #[test]
    fn bottom_rank_below_reduced_rank(
        spec in prop::sample::select(vec!["pentagon", "diamond:3", "boolean:3", "subspace:q=2,n=3", "subgroups:d=2,4", "product:lengths=2,2"]),
        a in 0usize..64,
        b in 0usize..64,
    ) {
        let l = generate(spec).unwrap().lattice;
        let (a, b) = (a % l.len(), b % l.len());
        let (hi, lo) = (l.join(a, b), l.meet(a, b));
        let rb = bottom_rank(&l, hi, lo).unwrap();
        let r0 = reduced_rank(&l, hi, lo).unwrap();
        prop_assert!(rb.rank <= r0.rank);
        prop_assert!(is_independent(&l, &rb.sequence, lo).unwrap());
        prop_assert_eq!(rb.sequence.len() as u32, rb.rank);
    }

    #[test]
    fn independence_is_permutation_invariant(
        spec in prop::sample::select(vec!["subspace:q=3,n=3", "subgroups:d=4,4", "product:lengths=3,3,3", "subspace:q=2,n=4"]),
        raw in prop::collection::vec(0usize..512, 0..=5),
        base in 0usize..512,
        perm_seed in any::<u64>(),
    ) {
        let l = generate(spec).unwrap().lattice;
        let base = base % l.len();
        let seq: Vec<usize> = raw.iter().map(|&x| l.join(x % l.len(), base)).collect();
        let mut shuffled = seq.clone();
        let mut s = perm_seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let t = Tables::new(&l);
        let ind = is_independent(&l, &seq, base).unwrap();
        prop_assert_eq!(ind, is_independent(&l, &shuffled, base).unwrap());
        prop_assert_eq!(ind, t.independent_by_cube(&seq, base));
    }

    #[test]
    fn lattice_json_round_trips(spec in prop::sample::select(vec!["pentagon", "diamond:4", "boolean:3", "subgroups:d=12", "chain:3"])) {
        let l = generate(spec).unwrap().lattice;
        let back = FiniteLattice::from_json(&l.to_json()).unwrap();
        prop_assert_eq!(back.len(), l.len());
        for a in l.elements() {
            for b in l.elements() {
                let (x, y) = (back.id(l.name(a)).unwrap(), back.id(l.name(b)).unwrap());
                prop_assert_eq!(back.id(l.name(l.meet(a, b))).unwrap(), back.meet(x, y));
            }
        }
    }

    #[test]
    fn ball_lattice_operations(
        g1 in prop::collection::vec(-3i64..=3, 3),
        g2 in prop::collection::vec(-3i64..=3, 3),
        x in elem_q(),
    ) {
        let f = qt();
        let c = BallContext::new(f.clone(), parse_places(&f, "t,t-1,inf").unwrap()).unwrap();
        let (a, b) = (BallGroup::new(g1), BallGroup::new(g2));
        let meet = c.meet(&a, &b).unwrap();
        let join = c.join(&a, &b).unwrap();
        prop_assert_eq!(
            c.member(&meet, &x).unwrap(),
            c.member(&a, &x).unwrap() && c.member(&b, &x).unwrap()
        );
        prop_assert!(meet.is_subgroup_of(&a) && a.is_subgroup_of(&join));
        if c.member(&join, &x).unwrap() {
            let (u, v) = c.decompose_join(&a, &b, &x).unwrap();
            prop_assert!(c.member(&a, &u).unwrap() && c.member(&b, &v).unwrap());
            prop_assert_eq!(f.add(&u, &v), x.clone());
        }
        if !f.is_zero(&x) {
            let s = c.scale(&x, &a).unwrap();
            let vals: Vec<i64> = c.vals(&x).iter().map(|v| v.finite().unwrap()).collect();
            prop_assert_eq!(s.gamma, a.gamma.iter().zip(&vals).map(|(g, v)| g + v).collect::<Vec<_>>());
        }
    }
}

#[test]
fn valuation_of_zero_is_infinite() {
    let f = qt();
    let places = parse_places(&f, "t,inf").unwrap();
    for p in &places {
        assert_eq!(f.val(p, &f.zero()), Val::Infinite);
    }
}
