//! Property tests of the λ-bracket engine on a real W-algebra table.
//!
//! (2|1) has odd generators, so every sign rule is exercised.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use walgebra::coeff::q;
use walgebra::liestruct::{LieData, PartitionSpec};
use walgebra::pvacore::*;
use walgebra::wbracket::{bracket_table, MasterTable, SignConvention};
use walgebra::{Coeff, GenIndex, Half, Q};

type P = DiffPoly<GenIndex, Q>;

fn fixture() -> &'static (Arc<LieData>, MasterTable<Q>) {
    static F: OnceLock<(Arc<LieData>, MasterTable<Q>)> = OnceLock::new();
    F.get_or_init(|| {
        let ld = Arc::new(LieData::new(&PartitionSpec::superalg(&[2], &[1]).unwrap()).unwrap());
        let t = bracket_table(&ld, SignConvention::SELECTED);
        t.fill();
        (ld, t)
    })
}

fn gens() -> &'static [GenIndex] {
    &fixture().0.cdata.gens
}

type RawTerm = (i64, Vec<(usize, u32)>);

fn raw_terms(max_terms: usize, max_deg: usize) -> impl Strategy<Value = Vec<RawTerm>> {
    let n = gens().len();
    prop::collection::vec((-3i64..=3, prop::collection::vec((0..n, 0u32..=2), 1..=max_deg)), 0..=max_terms)
}

fn build(raw: &[RawTerm]) -> P {
    let g = gens();
    DiffPoly::normalize(raw.iter().map(|(c, fs)| (q(*c), fs.iter().map(|&(i, d)| Factor::new(g[i], d)).collect())))
}

fn element() -> impl Strategy<Value = P> {
    raw_terms(4, 2).prop_map(|r| build(&r))
}

/// A nonzero element of a single parity.
fn homogeneous() -> impl Strategy<Value = P> {
    (element(), any::<bool>()).prop_map(|(p, odd)| p.parity_part(odd)).prop_filter("nonzero", |p| !p.is_zero())
}

/// A nonzero element of a single weight and parity.
fn weighted() -> impl Strategy<Value = P> {
    homogeneous().prop_map(|p| {
        let w = p.terms().keys().next().unwrap().weight();
        p.weight_part(w)
    })
}

fn br(a: &P, b: &P) -> LambdaPoly<GenIndex, Q> {
    extend_bracket(&fixture().1, a, b).unwrap()
}

fn sgn(neg: bool) -> Q {
    if neg {
        q(-1)
    } else {
        q(1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_ignores_term_order(raw in raw_terms(5, 3), seed in any::<u64>()) {
        let mut shuffled = raw.clone();
        let k = shuffled.len().max(1);
        shuffled.rotate_left((seed as usize) % k);
        prop_assert_eq!(build(&raw), build(&shuffled));
    }

    #[test]
    fn product_is_associative_and_supercommutative(a in homogeneous(), b in homogeneous(), c in element()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let s = sgn(a.parity().unwrap() && b.parity().unwrap());
        prop_assert_eq!(a.mul(&b), b.mul(&a).scale(&s));
    }

    #[test]
    fn partial_is_a_derivation(a in element(), b in element()) {
        prop_assert_eq!(a.mul(&b).partial(), a.partial().mul(&b).plus(&a.mul(&b.partial())));
        prop_assert_eq!(a.partial_n(3), a.partial().partial().partial());
    }

    #[test]
    fn linear_term_ignores_total_derivatives(a in element(), b in element()) {
        let sum = a.plus(&b.partial());
        prop_assert_eq!(sum.linear_term(), a.linear_term());
    }

    #[test]
    fn bracket_is_bilinear(a in element(), b in element(), c in element(), k in -3i64..=3) {
        prop_assert_eq!(br(&a, &b.plus(&c)), br(&a, &b).plus(&br(&a, &c)));
        prop_assert_eq!(br(&a.plus(&c), &b), br(&a, &b).plus(&br(&c, &b)));
        prop_assert_eq!(br(&a.scale(&q(k)), &b), br(&a, &b).scale(&q(k)));
    }

    #[test]
    fn sesquilinearity(a in element(), b in element()) {
        let ab = br(&a, &b);
        prop_assert_eq!(br(&a.partial(), &b), ab.neg_lambda_pow(1));
        prop_assert_eq!(br(&a, &b.partial()), ab.lambda_plus_partial_pow(1));
    }

    #[test]
    fn right_leibniz(a in homogeneous(), b in homogeneous(), c in element()) {
        let s = sgn(a.parity().unwrap() && b.parity().unwrap());
        let lhs = br(&a, &b.mul(&c));
        let rhs = br(&a, &b).mul_right(&c).plus(&br(&a, &c).mul_left(&b).scale(&s));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn skew_symmetry_on_elements(a in element(), b in element()) {
        prop_assert!(skew_residual(&fixture().1, &a, &b).unwrap().is_zero());
    }

    #[test]
    fn weight_bound(a in weighted(), b in weighted()) {
        let wa = a.weight_of().unwrap().unwrap();
        let wb = b.weight_of().unwrap().unwrap();
        let ab = br(&a, &b);
        for (n, c) in ab.coeffs().iter().enumerate() {
            if let Some(w) = c.weight_of().unwrap() {
                prop_assert_eq!(w, wa + wb - Half::int(n as i32 + 1));
            }
        }
        if let Some(d) = ab.degree() {
            prop_assert!(Half::int(d as i32 + 1) <= wa + wb);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn jacobi_on_elements(a in homogeneous(), b in homogeneous(), c in homogeneous()) {
        prop_assert!(jacobi_residual(&fixture().1, &a, &b, &c).unwrap().is_zero());
    }
}

#[test]
fn odd_squares_vanish() {
    let odd = gens().iter().find(|g| g.odd).copied().unwrap();
    let x = P::var(odd);
    assert!(x.mul(&x).is_zero());
    assert!(!x.mul(&P::var_d(odd, 1)).is_zero());
    let even = gens().iter().find(|g| !g.odd).copied().unwrap();
    assert_eq!(P::var(even).mul(&P::var(even)).len(), 1);
}

#[test]
fn nth_product_is_scaled_coefficient() {
    let g = gens();
    let (a, b) = (P::var(g[g.len() - 1]), P::var(g[g.len() - 1]));
    let l = br(&a, &b);
    for n in 0..=l.degree().unwrap() {
        let fact: i64 = (1..=n as i64).product();
        assert_eq!(nth_product(&fixture().1, &a, &b, n).unwrap(), l.get(n).scale(&q(fact)));
    }
}

#[test]
fn missing_table_entry_is_an_error() {
    let t: TableMap<GenIndex, Q> = TableMap::new();
    let g = gens();
    let e = extend_bracket(&t, &P::var(g[0]), &P::var(g[0])).unwrap_err();
    assert!(matches!(e, PvaError::MissingTableEntry(..)));
    assert!(extend_bracket(&t, &P::constant(Q::cone()), &P::var(g[0])).unwrap().is_zero());
}

#[test]
fn table_map_mirrors_master_table() {
    let (ld, t) = fixture();
    let map = t.to_map();
    assert_eq!(map.len(), ld.cdata.len().pow(2));
    let s = axiom_summary(&map, &ld.cdata.gens).unwrap();
    assert_eq!((s.skew_violations, s.jacobi_violations), (0, 0));
    assert_eq!(s.triples_checked, ld.cdata.len().pow(3));
}
