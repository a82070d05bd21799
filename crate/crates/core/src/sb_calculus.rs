//! Severi-Brauer flag varieties: index formulas, stable birational normal
//! forms and annihilation bounds for `A_0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd, gcd_all, is_prime, is_squarefree, valuation};
use crate::csa::{primary_decompose, AlgebraDescriptor, BaseKind};
use crate::error::{Error, Result};

/// `SB_{n_1,...,n_k}(A)` for a strictly increasing flag type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFlag")]
pub struct FlagDescriptor {
    algebra: AlgebraDescriptor,
    flags: Vec<u64>,
}

#[derive(Deserialize)]
struct RawFlag {
    algebra: AlgebraDescriptor,
    flags: Vec<u64>,
}

impl TryFrom<RawFlag> for FlagDescriptor {
    type Error = Error;

    fn try_from(raw: RawFlag) -> Result<Self> {
        FlagDescriptor::new(raw.algebra, raw.flags)
    }
}

impl FlagDescriptor {
    pub fn new(algebra: AlgebraDescriptor, flags: Vec<u64>) -> Result<Self> {
        if flags.is_empty() {
            return Err(Error::InvalidFlags("flag type is empty".into()));
        }
        if flags[0] == 0 || flags.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFlags(format!("{flags:?} is not strictly increasing and positive")));
        }
        let last = *flags.last().expect("nonempty");
        if last >= algebra.degree() {
            return Err(Error::InvalidFlags(format!("entry {last} is not below deg(A) = {}", algebra.degree())));
        }
        Ok(FlagDescriptor { algebra, flags })
    }

    pub fn algebra(&self) -> &AlgebraDescriptor {
        &self.algebra
    }

    pub fn flags(&self) -> &[u64] {
        &self.flags
    }
}

/// Index of `A` over the function field of the variety:
/// `gcd(ind A, n_1, ..., n_k)`.
pub fn generic_index(x: &FlagDescriptor) -> u64 {
    gcd_all(std::iter::once(x.algebra.index()).chain(x.flags.iter().copied()))
}

/// Index of the variety itself, `ind(A) / d`.
pub fn variety_index(x: &FlagDescriptor) -> u64 {
    x.algebra.index() / generic_index(x)
}

/// Whether the variety has a point over an extension `L` on which `A` has
/// index `ind_over_l`.
pub fn has_rational_point(x: &FlagDescriptor, ind_over_l: u64) -> Result<bool> {
    if ind_over_l == 0 || x.algebra.index() % ind_over_l != 0 {
        return Err(Error::InvalidIndex(format!("{ind_over_l} does not divide ind(A) = {}", x.algebra.index())));
    }
    Ok(generic_index(x) % ind_over_l == 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalComponent {
    pub prime: u64,
    /// `v_p(d)`.
    pub exponent: u32,
    pub algebra: AlgebraDescriptor,
}

/// `X` is stably birational to `prod_p SB_{p^b}(D_p)` over the primes of `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub d: u64,
    pub components: Vec<NormalComponent>,
}

pub fn normal_form(x: &FlagDescriptor) -> NormalForm {
    let d = generic_index(x);
    let components = primary_decompose(&x.algebra)
        .into_iter()
        .filter_map(|algebra| {
            let (p, _) = factorize(algebra.index())[0];
            let b = valuation(d, p);
            (b > 0).then_some(NormalComponent { prime: p, exponent: b, algebra })
        })
        .collect();
    NormalForm { d, components }
}

/// `gcd(d, e)`: `SB_e(A) x SB_d(A)` has the same `A_0` as `SB_{gcd(d,e)}(A)`.
pub fn product_reduce(a: &AlgebraDescriptor, e: u64, d: u64) -> Result<u64> {
    let top = a.degree().saturating_sub(1);
    for v in [e, d] {
        if v == 0 || v > top {
            return Err(Error::InvalidFlags(format!("{v} is outside 1..={top}")));
        }
    }
    Ok(gcd(d, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
}

impl Rule {
    pub const ALL: [Rule; 7] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6, Rule::R7];

    pub fn citation(self) -> &'static str {
        match self {
            Rule::R1 => "A0 is annihilated by d and by n/d",
            Rule::R2 => "A0 vanishes when n is square-free",
            Rule::R3 => "A0 vanishes over local and global fields",
            Rule::R4 => "A0 of SB_2 vanishes when n is even, 8 does not divide n and char F does not divide n",
            Rule::R5 => "A0 of SB_4 is 2-torsion when 4 does not divide exp(A)",
            Rule::R6 => "A0 of SB_{p^b}(D_p) is p^(b-1)-torsion when A0(SB_p) vanishes over every finite extension",
            Rule::R7 => "per-prime bounds combine multiplicatively",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidHypotheses(format!("unknown rule `{s}`")))
    }
}

/// Extra assumptions a caller may grant the rule engine.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hypotheses {
    /// Asserts `char F` does not divide `ind(A)`.
    #[serde(default)]
    pub char_coprime_to_index: bool,
    /// Primes `p` for which `A0(SB_p(D_L)) = 0` is assumed for every finite `L`.
    #[serde(default)]
    pub sb_p_vanishing: BTreeSet<u64>,
}

impl Hypotheses {
    pub fn none() -> Self {
        Hypotheses::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleApplication {
    pub id: Rule,
    pub exponent: u64,
    pub citation: String,
}

/// Annihilation bound for `A_0(X)`; exponent 1 means `A_0(X) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionBound {
    pub exponent: u64,
    pub vanishes: bool,
    pub rules: Vec<RuleApplication>,
    pub conditional_assumptions: Vec<String>,
}

/// The rule engine. Individual rules can be switched off, which is how the
/// oracle suite checks that it notices a broken engine.
#[derive(Debug, Clone, Default)]
pub struct TorsionEngine {
    disabled: BTreeSet<Rule>,
}

impl TorsionEngine {
    pub fn new() -> Self {
        TorsionEngine::default()
    }

    pub fn without(mut self, rule: Rule) -> Self {
        self.disabled.insert(rule);
        self
    }

    pub fn bound(&self, x: &FlagDescriptor, field_kind: Option<BaseKind>, hyp: &Hypotheses) -> Result<TorsionBound> {
        let a = x.algebra();
        let kind = match (a.kind(), field_kind) {
            (k, None) => k,
            (BaseKind::Abstract, Some(k)) => k,
            (k, Some(f)) if k == f => k,
            (k, Some(f)) => {
                return Err(Error::InvalidHypotheses(format!("field kind {f} contradicts a {k} algebra")));
            }
        };
        if hyp.char_coprime_to_index && a.char_divides_index() == Some(true) {
            return Err(Error::InvalidHypotheses("char F does not divide n, but the algebra declares it does".into()));
        }
        if let Some(bad) = hyp.sb_p_vanishing.iter().find(|p| !is_prime(**p)) {
            return Err(Error::InvalidHypotheses(format!("{bad} is not a prime")));
        }

        let n = a.index();
        let d = generic_index(x);
        let mut rules = Vec::new();
        let mut assumptions = Vec::new();
        let mut push = |id: Rule, exponent: u64| rules.push(RuleApplication { id, exponent, citation: id.citation().into() });

        let r1 = gcd(d, n / d);
        push(Rule::R1, r1);
        if is_squarefree(n) {
            push(Rule::R2, 1);
        }
        if matches!(kind, BaseKind::Local | BaseKind::Global) {
            push(Rule::R3, 1);
        }
        let char_coprime = a.char_divides_index() == Some(false) || hyp.char_coprime_to_index;
        if d == 2 && n % 2 == 0 && n % 8 != 0 && char_coprime {
            push(Rule::R4, 1);
            if a.char_divides_index() != Some(false) {
                assumptions.push("char F does not divide ind(A)".to_string());
            }
        }
        if d == 4 && a.exponent() % 4 != 0 {
            push(Rule::R5, 2);
        }
        let mut refined = false;
        let mut per_prime = 1;
        for (p, b) in factorize(d) {
            let a_p = valuation(n, p);
            let mut t = p.pow(b);
            if hyp.sb_p_vanishing.contains(&p) && 2 <= b && b < a_p {
                t = p.pow(b - 1);
                push(Rule::R6, t);
                assumptions.push(format!("A0(SB_{p}(D_L)) = 0 for every finite extension L"));
                refined = true;
            }
            per_prime *= t;
        }
        if refined {
            push(Rule::R7, per_prime);
        }

        rules.retain(|r| !self.disabled.contains(&r.id));
        let exponent = gcd_all(rules.iter().map(|r| r.exponent));
        let exponent = if rules.is_empty() { d } else { exponent };
        Ok(TorsionBound { exponent, vanishes: exponent == 1, rules, conditional_assumptions: assumptions })
    }
}

pub fn torsion_bound(x: &FlagDescriptor, field_kind: Option<BaseKind>, hyp: &Hypotheses) -> Result<TorsionBound> {
    TorsionEngine::new().bound(x, field_kind, hyp)
}

/// Per-prime `(p, a, b)` data of `n = ind(A)` and `d`.
pub fn prime_profile(n: u64, d: u64) -> Vec<(u64, u32, u32)> {
    let mut profile: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
    for (p, a) in factorize(n) {
        profile.insert(p, (a, valuation(d, p)));
    }
    profile.into_iter().map(|(p, (a, b))| (p, a, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flag(index: u64, exponent: u64, degree: Option<u64>, flags: &[u64]) -> FlagDescriptor {
        FlagDescriptor::new(AlgebraDescriptor::abstract_algebra(index, exponent, degree, None).unwrap(), flags.to_vec())
            .unwrap()
    }

    fn with_char(index: u64, flags: &[u64], char_divides: bool) -> FlagDescriptor {
        let a = AlgebraDescriptor::abstract_algebra(index, index, None, Some(char_divides)).unwrap();
        FlagDescriptor::new(a, flags.to_vec()).unwrap()
    }

    #[test]
    fn index_examples() {
        assert_eq!(generic_index(&flag(12, 12, None, &[4, 6])), 2);
        assert_eq!(generic_index(&flag(12, 12, None, &[3, 9])), 3);
        assert_eq!(generic_index(&flag(7, 7, None, &[1])), 1);
        assert_eq!(variety_index(&flag(12, 12, None, &[4, 6])), 6);
        assert_eq!(variety_index(&flag(27, 27, None, &[9])), 3);
        assert_eq!(variety_index(&flag(4, 4, Some(8), &[4])), 1);
    }

    #[test]
    fn flag_validation() {
        let a = AlgebraDescriptor::abstract_algebra(6, 6, None, None).unwrap();
        assert!(FlagDescriptor::new(a.clone(), vec![]).is_err());
        assert!(FlagDescriptor::new(a.clone(), vec![3, 2]).is_err());
        assert!(FlagDescriptor::new(a.clone(), vec![0, 2]).is_err());
        assert!(FlagDescriptor::new(a.clone(), vec![6]).is_err());
        assert!(FlagDescriptor::new(a, vec![1, 5]).is_ok());
    }

    #[test]
    fn rational_points() {
        let x = flag(12, 12, None, &[4, 6]);
        assert!(has_rational_point(&x, 2).unwrap());
        assert!(!has_rational_point(&x, 4).unwrap());
        assert!(has_rational_point(&x, 1).unwrap());
        assert!(matches!(has_rational_point(&x, 5), Err(Error::InvalidIndex(_))));
    }

    #[test]
    fn normal_forms() {
        let nf = normal_form(&flag(12, 12, None, &[4, 6]));
        assert_eq!(nf.d, 2);
        let comps: Vec<(u64, u32, u64)> = nf.components.iter().map(|c| (c.prime, c.exponent, c.algebra.index())).collect();
        assert_eq!(comps, [(2, 1, 4)]);
        let nf = normal_form(&flag(36, 36, None, &[6, 12]));
        assert_eq!(nf.d, 6);
        let comps: Vec<(u64, u32, u64)> = nf.components.iter().map(|c| (c.prime, c.exponent, c.algebra.index())).collect();
        assert_eq!(comps, [(2, 1, 4), (3, 1, 9)]);
        let nf = normal_form(&flag(1, 1, Some(3), &[1]));
        assert_eq!((nf.d, nf.components.len()), (1, 0));
    }

    #[test]
    fn torsion_examples() {
        let b = torsion_bound(&flag(30, 30, None, &[6]), None, &Hypotheses::none()).unwrap();
        assert_eq!(b.exponent, 1);
        assert!(b.vanishes);
        assert_eq!(b.rules.iter().map(|r| r.id).collect::<Vec<_>>(), [Rule::R1, Rule::R2]);

        let b = torsion_bound(&flag(16, 2, None, &[4]), None, &Hypotheses::none()).unwrap();
        assert_eq!(b.rules.iter().map(|r| (r.id, r.exponent)).collect::<Vec<_>>(), [(Rule::R1, 4), (Rule::R5, 2)]);
        assert_eq!(b.exponent, 2);

        let b = torsion_bound(&with_char(12, &[4, 6], false), None, &Hypotheses::none()).unwrap();
        assert_eq!(b.rules.iter().map(|r| (r.id, r.exponent)).collect::<Vec<_>>(), [(Rule::R1, 2), (Rule::R4, 1)]);
        assert_eq!(b.exponent, 1);

        let b = torsion_bound(&flag(16, 16, None, &[4]), Some(BaseKind::Global), &Hypotheses::none()).unwrap();
        assert_eq!(b.exponent, 1);
        assert!(b.rules.iter().any(|r| r.id == Rule::R3));
    }

    #[test]
    fn r4_needs_char_information() {
        let b = torsion_bound(&flag(12, 12, None, &[4, 6]), None, &Hypotheses::none()).unwrap();
        assert_eq!(b.exponent, 2);
        let hyp = Hypotheses { char_coprime_to_index: true, ..Hypotheses::none() };
        let b = torsion_bound(&flag(12, 12, None, &[4, 6]), None, &hyp).unwrap();
        assert_eq!(b.exponent, 1);
        assert_eq!(b.conditional_assumptions.len(), 1);
        let err = torsion_bound(&with_char(12, &[4, 6], true), None, &hyp).unwrap_err();
        assert!(matches!(err, Error::InvalidHypotheses(_)));
    }

    #[test]
    fn r6_is_conditional() {
        // n = 2^5, d = 2^3: R1 gives gcd(8, 4) = 4.
        let x = flag(32, 32, None, &[8]);
        assert_eq!(torsion_bound(&x, None, &Hypotheses::none()).unwrap().exponent, 4);
        let hyp = Hypotheses { sb_p_vanishing: [2].into(), ..Hypotheses::none() };
        let b = torsion_bound(&x, None, &hyp).unwrap();
        assert_eq!(b.rules.iter().map(|r| (r.id, r.exponent)).collect::<Vec<_>>(), [(Rule::R1, 4), (Rule::R6, 4), (Rule::R7, 4)]);
        // n = 2^6, d = 2^4: R1 gives 4, R6 gives 8.
        let x = flag(64, 64, None, &[16]);
        let b = torsion_bound(&x, None, &hyp).unwrap();
        assert_eq!(b.exponent, 4);
        assert!(!b.conditional_assumptions.is_empty());
        let bad = Hypotheses { sb_p_vanishing: [4].into(), ..Hypotheses::none() };
        assert!(torsion_bound(&x, None, &bad).is_err());
    }

    #[test]
    fn disabled_rule_changes_the_bound() {
        let x = flag(30, 30, None, &[6]);
        let b = TorsionEngine::new().without(Rule::R2).bound(&x, None, &Hypotheses::none()).unwrap();
        assert_eq!(b.exponent, 1);
        let x = flag(6, 6, None, &[2]);
        let b = TorsionEngine::new().without(Rule::R2).without(Rule::R1).bound(&x, None, &Hypotheses::none()).unwrap();
        assert_eq!(b.exponent, 2);
    }

    #[test]
    fn product_reduction() {
        let a = AlgebraDescriptor::abstract_algebra(12, 12, None, None).unwrap();
        assert_eq!(product_reduce(&a, 4, 6).unwrap(), 2);
        assert_eq!(product_reduce(&a, 5, 5).unwrap(), 5);
        assert_eq!(product_reduce(&a, 1, 7).unwrap(), 1);
        assert!(product_reduce(&a, 12, 1).is_err());
    }
}
