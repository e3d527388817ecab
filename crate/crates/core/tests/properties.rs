use proptest::prelude::*;

use dp5::gf::FieldCtx;
use dp5::picard::{symmetries, CurveClass};

fn field_size() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9, 16, 25])
}

fn eff_dual_class() -> impl Strategy<Value = CurveClass> {
    (0i64..12, prop::array::uniform4(0i64..12))
        .prop_map(|(a, c)| CurveClass([a, -c[0].min(a), -c[1].min(a), -c[2].min(a), -c[3].min(a)]))
        .prop_filter("nef", |c| c.in_eff_dual())
}

proptest! {
    #[test]
    fn field_axioms(q in field_size(), x in 0u32..1000, y in 0u32..1000, z in 0u32..1000) {
        let f = FieldCtx::from_size(q).unwrap();
        let (a, b, c) = (x % q, y % q, z % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, (q - 1) as i64).unwrap(), 1);
        }
    }

    #[test]
    fn pairings_round_trip(c in eff_dual_class()) {
        let data = c.degree_data();
        prop_assert_eq!(CurveClass::from_pairings(data.lines).unwrap(), c);
        prop_assert!(data.lines.iter().all(|&d| d >= 0));
        prop_assert_eq!(data.d, c.pairing(&CurveClass::anticanonical()));
    }

    #[test]
    fn normalization_is_symmetry_invariant(c in eff_dual_class(), k in 0usize..120) {
        let s = &symmetries()[k];
        let a = c.chamber_normalize().unwrap();
        let b = c.relabel(s).chamber_normalize().unwrap();
        prop_assert_eq!(a.data, b.data);
        prop_assert!(a.data.is_normalized());
    }

    #[test]
    fn pairing_is_symmetric_and_bilinear(x in prop::array::uniform5(-6i64..6), y in prop::array::uniform5(-6i64..6), m in -3i64..4) {
        let (x, y) = (CurveClass(x), CurveClass(y));
        prop_assert_eq!(x.pairing(&y), y.pairing(&x));
        prop_assert_eq!(x.scale(m).pairing(&y), m * x.pairing(&y));
        prop_assert_eq!(x.add(&y).pairing(&y), x.pairing(&y) + y.pairing(&y));
    }
}
