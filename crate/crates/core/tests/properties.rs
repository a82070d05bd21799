use num_bigint::BigUint;
use proptest::prelude::*;
use sbflag_core::csa::AlgebraDescriptor;
use sbflag_core::global_brauer::{global_index, global_restrict};
use sbflag_core::local_brauer::LocalBrauerClass;
use sbflag_core::sb_calculus::{generic_index, has_rational_point, normal_form, variety_index, Hypotheses, Rule, TorsionEngine};
use sbflag_core::{FlagDescriptor, FormalExtension, GlobalBrauerClass, QZInvariant};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn inv() -> impl Strategy<Value = QZInvariant> {
    (-500i64..500, 1u64..200).prop_map(|(a, n)| QZInvariant::new(a, n).unwrap())
}

fn flag_type() -> impl Strategy<Value = FlagDescriptor> {
    (2u64..500, 1usize..4, any::<u64>()).prop_flat_map(|(n, k, seed)| {
        proptest::collection::btree_set(1..n, 1..=k.min(n as usize - 1)).prop_map(move |flags| {
            let a = AlgebraDescriptor::abstract_algebra(n, n, None, (seed % 2 == 0).then_some(seed % 4 == 0)).unwrap();
            FlagDescriptor::new(a, flags.into_iter().collect()).unwrap()
        })
    })
}

fn class() -> impl Strategy<Value = GlobalBrauerClass> {
    proptest::collection::vec(inv(), 1..4).prop_map(|mut v| {
        let total = QZInvariant::sum(&v);
        v.push(total.neg());
        let labels: Vec<String> = (0..v.len()).map(|i| format!("v{i}")).collect();
        GlobalBrauerClass::from_invariants(labels.iter().map(String::as_str).zip(v)).unwrap()
    })
}

proptest! {
    #[test]
    fn invariants_form_a_group(a in inv(), b in inv(), c in inv()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert_eq!(a.add(&QZInvariant::zero()), a.clone());
        prop_assert!(a.scale_big(&a.order()).is_zero());
    }

    #[test]
    fn invariants_are_canonical(a in inv()) {
        prop_assert!(a.numerator() < a.denominator());
        prop_assert_eq!(a.order(), a.denominator().clone());
        let back: QZInvariant = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn primary_split_sums_back(a in inv()) {
        let parts = a.primary_split();
        prop_assert_eq!(QZInvariant::sum(parts.values()), a.clone());
        let orders: BigUint = parts.values().map(QZInvariant::order).product();
        prop_assert_eq!(orders, a.order());
    }

    #[test]
    fn local_restriction_multiplies(a in inv(), d in 1u64..50) {
        let c = LocalBrauerClass::new(a.clone());
        let r = c.local_restrict(d).unwrap();
        prop_assert_eq!(r, LocalBrauerClass::new(a.scale(d)));
    }

    #[test]
    fn index_equals_period(c in class()) {
        prop_assert_eq!(global_index(&c), c.period());
        let product: BigUint = c.primary_components().values().map(|p| p.index()).product();
        prop_assert_eq!(product, c.index());
    }

    #[test]
    fn restriction_keeps_zero_sum(c in class(), d in 1u64..7) {
        let place = c.places().keys().next().cloned().unwrap_or_else(|| "v0".into());
        let e = FormalExtension::new(d).with_local(&place, vec![d]);
        let r = global_restrict(&c, &e).unwrap();
        prop_assert!(QZInvariant::sum(r.support().values()).is_zero());
        prop_assert!((c.index() % r.index()) == BigUint::from(0u32));
    }

    #[test]
    fn index_theorem(x in flag_type()) {
        let n = x.algebra().index();
        let d = generic_index(&x);
        prop_assert_eq!(variety_index(&x) * d, n);
        prop_assert_eq!(d, x.flags().iter().fold(n, |g, f| gcd(g, *f)));
        prop_assert!(has_rational_point(&x, 1).unwrap());
        prop_assert_eq!(has_rational_point(&x, n).unwrap(), d == n);
        let nf = normal_form(&x);
        prop_assert_eq!(nf.components.iter().map(|c| c.prime.pow(c.exponent)).product::<u64>(), d);
    }

    #[test]
    fn torsion_exponent_divides_r1(x in flag_type()) {
        let n = x.algebra().index();
        let d = generic_index(&x);
        let b = TorsionEngine::new().bound(&x, None, &Hypotheses::none()).unwrap();
        prop_assert_eq!(gcd(d, n / d) % b.exponent, 0);
        prop_assert_eq!(b.vanishes, b.exponent == 1);
        for r in &b.rules {
            prop_assert_eq!(r.exponent % b.exponent, 0);
        }
    }

    #[test]
    fn hypotheses_only_help(x in flag_type(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let none = TorsionEngine::new().bound(&x, None, &Hypotheses::none()).unwrap();
        let hyp = Hypotheses { sb_p_vanishing: [p].into(), ..Hypotheses::none() };
        let more = TorsionEngine::new().bound(&x, None, &hyp).unwrap();
        prop_assert_eq!(none.exponent % more.exponent, 0);
    }

    #[test]
    fn dropping_rules_only_hurts(x in flag_type(), rule in prop::sample::select(Rule::ALL.to_vec())) {
        let full = TorsionEngine::new().bound(&x, None, &Hypotheses::none()).unwrap();
        let less = TorsionEngine::new().without(rule).bound(&x, None, &Hypotheses::none()).unwrap();
        prop_assert_eq!(less.exponent % full.exponent, 0);
    }
}
