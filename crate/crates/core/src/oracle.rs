//! Brute-force verifiers.
//!
//! Nothing here calls the engine operation it checks: indices are found by
//! linear scan, lemma patterns by full enumeration with a separate local
//! compositum rule, and torsion expectations are recomputed rule by rule.
//! Enumeration order is lexicographic everywhere and results that are
//! compared as sets are returned as `BTreeSet`s.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::csa::{AlgebraDescriptor, BaseKind};
use crate::equiv_chain::validate_chain;
use crate::error::{Error, Result};
use crate::fixtures::{chain_fixtures, lemma_fixtures};
use crate::global_brauer::{
    construct_extension_lemma, global_index, global_restrict, place_catalog, FieldModel, FormalExtension,
    GlobalBrauerClass,
};
use crate::invariants::QZInvariant;
use crate::local_brauer::{CountingCase, ExtensionCount, LocalExtensionLabel, LocalField};
use crate::sb_calculus::{generic_index, normal_form, variety_index, FlagDescriptor, Hypotheses, Rule, TorsionEngine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnumerationBudget {
    pub max_places: usize,
    pub max_denominator: u64,
    pub max_degree: u64,
    pub max_index: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_places: 3, max_denominator: 12, max_degree: 6, max_index: 360 }
    }
}

/// Hard ceilings; a budget above any of them is refused.
pub const BUDGET_CEILING: EnumerationBudget =
    EnumerationBudget { max_places: 4, max_denominator: 24, max_degree: 12, max_index: 5040 };

impl EnumerationBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_places == 0 || self.max_denominator == 0 || self.max_degree == 0 || self.max_index == 0 {
            return Err(Error::BudgetExceeded("budget entries must be positive".into()));
        }
        Ok(())
    }

    fn over_ceiling(&self) -> Vec<&'static str> {
        let c = BUDGET_CEILING;
        [
            (self.max_places > c.max_places, "max_places"),
            (self.max_denominator > c.max_denominator, "max_denominator"),
            (self.max_degree > c.max_degree, "max_degree"),
            (self.max_index > c.max_index, "max_index"),
        ]
        .into_iter()
        .filter_map(|(over, name)| over.then_some(name))
        .collect()
    }
}

fn euclid(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn fraction(inv: &QZInvariant) -> Result<(u64, u64)> {
    let num = inv.numerator().to_u64();
    let den = inv.denominator().to_u64();
    match (num, den) {
        (Some(a), Some(n)) => Ok((a, n)),
        _ => Err(Error::BudgetExceeded(format!("invariant {inv} is too large to scan"))),
    }
}

/// Order of `deg * a / n` in `Q/Z`.
fn scaled_order(a: u64, n: u64, deg: u64) -> u64 {
    let prod = (a as u128 * deg as u128 % n as u128) as u64;
    n / euclid(n, prod)
}

/// Least `N` killing every invariant, by scanning `N = 1, 2, ...`.
pub fn oracle_index(c: &GlobalBrauerClass, budget: &EnumerationBudget) -> Result<u64> {
    let invs = c.support().values().map(fraction).collect::<Result<Vec<_>>>()?;
    (1..=budget.max_index)
        .find(|&n| invs.iter().all(|&(a, d)| (a as u128 * n as u128) % d as u128 == 0))
        .ok_or_else(|| Error::BudgetExceeded(format!("index exceeds max_index = {}", budget.max_index)))
}

/// Local shape of a candidate `K` above one place: a partition of `p` and
/// the label of the full-degree component, if any.
pub type LocalPattern = (Vec<u64>, Option<LocalExtensionLabel>);

/// One candidate `K`, keyed by support place.
pub type KPattern = BTreeMap<String, LocalPattern>;

fn partitions_desc(n: u64, max: u64) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions_desc(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

type Parts = Vec<(u64, Option<LocalExtensionLabel>)>;

fn parts_of(e: &FormalExtension, place: &str, model: FieldModel) -> Parts {
    match e.local_data.get(place) {
        None if model == FieldModel::Local => vec![(e.degree, None)],
        None => vec![(1, None); e.degree as usize],
        Some(ds) => ds
            .iter()
            .enumerate()
            .map(|(i, d)| (*d, e.labels.get(place).and_then(|ls| ls.get(i).copied().flatten())))
            .collect(),
    }
}

/// Local degrees of the compositum above one place.
fn local_product(a: &Parts, b: &Parts, flagged: bool) -> Vec<u64> {
    let same_shape = a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.0 == y.0);
    let mut out = Vec::new();
    for (i, (d, x)) in a.iter().enumerate() {
        for (j, (e, y)) in b.iter().enumerate() {
            let same_field = d == e
                && *d > 1
                && match (x, y) {
                    (Some(x), Some(y)) => x == y,
                    (None, None) => i == j && same_shape && !flagged,
                    _ => false,
                };
            if same_field {
                out.extend(std::iter::repeat_n(*d, *d as usize));
            } else {
                out.push(d * e);
            }
        }
    }
    out
}

/// Every assignment of local data to a degree-`p` extension over the
/// support of `c` meeting all three index targets of the extension lemma.
///
/// Full-degree components range over the capped catalog of the place;
/// smaller parts are unlabeled. `l0` and `l1` should carry labels on their
/// full-degree components (as the normalized inputs of a lemma certificate
/// do).
pub fn oracle_lemma_search(
    c: &GlobalBrauerClass,
    l0: &FormalExtension,
    l1: &FormalExtension,
    p: u64,
    budget: &EnumerationBudget,
) -> Result<BTreeSet<KPattern>> {
    let support: Vec<(String, (u64, u64))> =
        c.support().iter().map(|(l, v)| Ok((l.clone(), fraction(v)?))).collect::<Result<_>>()?;
    if support.len() > budget.max_places || p > budget.max_degree {
        return Err(Error::BudgetExceeded(format!("{} places, degree {p}", support.len())));
    }
    let top = support.iter().fold(1, |acc, (_, (_, n))| acc / euclid(acc, *n) * n);
    if top > budget.max_index {
        return Err(Error::BudgetExceeded(format!("index {top} exceeds max_index")));
    }
    let m = (0..64u32)
        .find(|e| p.checked_pow(*e) == Some(top))
        .ok_or_else(|| Error::LemmaPreconditionsFailed("index is not a power of p".into()))?;
    if m < 2 {
        return Err(Error::LemmaPreconditionsFailed("index must be at least p^2".into()));
    }
    let v0 = support.iter().find(|(_, (_, n))| *n == top).map(|(l, _)| l.clone()).expect("index attained");
    let model = c.model();

    let mut options: Vec<Vec<LocalPattern>> = Vec::new();
    for (place, _) in &support {
        let mut opts = Vec::new();
        for part in partitions_desc(p, p) {
            if part == [p] {
                for label in place_catalog(&c.places()[place], p)? {
                    opts.push((part.clone(), Some(label)));
                }
            } else {
                opts.push((part, None));
            }
        }
        options.push(opts);
    }

    let targets = [top / p, top / p / p];
    let mut found = BTreeSet::new();
    for pattern in options.iter().map(|o| o.iter()).multi_cartesian_product() {
        let mut ind_k = 1;
        let mut ind_kl = [1u64; 2];
        for ((place, (a, n)), (parts, label)) in support.iter().zip(&pattern) {
            let k_parts: Parts = parts.iter().map(|d| (*d, if *d == p { *label } else { None })).collect();
            for (d, _) in &k_parts {
                let o = scaled_order(*a, *n, *d);
                ind_k = ind_k / euclid(ind_k, o) * o;
            }
            for (i, l) in [l0, l1].into_iter().enumerate() {
                for deg in local_product(&k_parts, &parts_of(l, place, model), *place == v0) {
                    let o = scaled_order(*a, *n, deg);
                    ind_kl[i] = ind_kl[i] / euclid(ind_kl[i], o) * o;
                }
            }
        }
        let certified = [l0, l1].iter().all(|l| {
            c.places().keys().any(|place| {
                let k_parts: Parts = match support.iter().position(|(s, _)| s == place) {
                    Some(i) => pattern[i].0.iter().map(|d| (*d, if *d == p { pattern[i].1 } else { None })).collect(),
                    None => vec![(1, None); p as usize],
                };
                local_product(&k_parts, &parts_of(l, place, model), *place == v0) == [p * l.degree]
            })
        });
        if certified && ind_k == targets[0] && ind_kl == [targets[1]; 2] {
            found.insert(
                support.iter().zip(&pattern).map(|((place, _), pat)| (place.clone(), (*pat).clone())).collect(),
            );
        }
    }
    Ok(found)
}

/// The pattern of an engine-built `K` over the support of `c`.
pub fn pattern_of(c: &GlobalBrauerClass, k: &FormalExtension) -> KPattern {
    c.support()
        .keys()
        .map(|place| {
            let parts = parts_of(k, place, c.model());
            let label = parts.iter().find(|(d, _)| *d == k.degree).and_then(|(_, l)| *l);
            (place.clone(), (parts.into_iter().map(|(d, _)| d).collect(), label))
        })
        .collect()
}

/// `gcd` over all rotations of the two mixed products
/// `(prod_{i != j} p_i^{a_i}) p_j^{b_j}` and `(prod_{i != j} p_i^{b_i}) p_j^{a_j}`.
pub fn oracle_torsion_combination(primes: &[(u64, u32, u32)]) -> u64 {
    let mut acc = 0;
    for j in 0..primes.len() {
        let mut first = 1;
        let mut second = 1;
        for (i, &(p, a, b)) in primes.iter().enumerate() {
            if i == j {
                first *= p.pow(b);
                second *= p.pow(a);
            } else {
                first *= p.pow(a);
                second *= p.pow(b);
            }
        }
        acc = euclid(euclid(acc, first), second);
    }
    acc.max(1)
}

/// Rule list `(id, exponent)` that a correct engine must report when no
/// optional hypotheses are granted.
pub fn expected_rules(n: u64, exponent: u64, d: u64, char_divides: Option<bool>, kind: BaseKind) -> Vec<(Rule, u64)> {
    let squarefree = (2..=n).take_while(|q| q * q <= n).all(|q| n % (q * q) != 0);
    let mut out = vec![(Rule::R1, euclid(d, n / d))];
    if squarefree {
        out.push((Rule::R2, 1));
    }
    if kind != BaseKind::Abstract {
        out.push((Rule::R3, 1));
    }
    if d == 2 && n % 2 == 0 && n % 8 != 0 && char_divides == Some(false) {
        out.push((Rule::R4, 1));
    }
    if d == 4 && exponent % 4 != 0 {
        out.push((Rule::R5, 2));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub budget_exceeded: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub budget_exceeded: bool,
    pub budget: EnumerationBudget,
    pub checks: Vec<CheckReport>,
}

const MAX_DIAGNOSTICS: usize = 5;

struct Check {
    report: CheckReport,
}

impl Check {
    fn new(name: &str) -> Self {
        Check {
            report: CheckReport {
                name: name.into(),
                cases: 0,
                passed: true,
                budget_exceeded: false,
                diagnostics: Vec::new(),
            },
        }
    }

    fn case(&mut self, ok: bool, diagnostic: impl FnOnce() -> String) {
        self.report.cases += 1;
        if !ok {
            self.report.passed = false;
            if self.report.diagnostics.len() < MAX_DIAGNOSTICS {
                self.report.diagnostics.push(diagnostic());
            }
        }
    }

    fn exceeded(mut self, what: String) -> CheckReport {
        self.report.budget_exceeded = true;
        self.report.diagnostics.push(format!("budget-exceeded: {what}"));
        self.report
    }
}

/// Canonical invariants `a/d` with `d <= max_den`, in `(d, a)` order.
pub fn canonical_invariants(max_den: u64) -> Vec<QZInvariant> {
    let mut out = vec![QZInvariant::zero()];
    for d in 2..=max_den {
        for a in 1..d {
            if euclid(a, d) == 1 {
                out.push(QZInvariant::new(a as i64, d).expect("positive denominator"));
            }
        }
    }
    out
}

/// Every zero-sum class on places `v1..vr` (`r <= max_places`) with all
/// denominators at most `max_den`, each support listed once.
pub fn enumerate_classes(max_places: usize, max_den: u64) -> Vec<GlobalBrauerClass> {
    let invs = canonical_invariants(max_den);
    let mut seen = BTreeSet::new();
    let mut out = vec![GlobalBrauerClass::trivial()];
    for r in 2..=max_places {
        for mut values in (0..r - 1).map(|_| invs.iter().cloned()).multi_cartesian_product() {
            let last = QZInvariant::sum(values.iter()).neg();
            if last.denominator().to_u64().is_none_or(|d| d > max_den) {
                continue;
            }
            values.push(last);
            let support: Vec<(String, QZInvariant)> = values
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (format!("v{}", i + 1), v))
                .collect();
            if !support.is_empty() && seen.insert(support.clone()) {
                let pairs = support.iter().map(|(l, v)| (l.as_str(), v.clone()));
                out.push(GlobalBrauerClass::from_invariants(pairs).expect("zero-sum by construction"));
            }
        }
    }
    out
}

fn check_index(budget: &EnumerationBudget) -> CheckReport {
    let mut check = Check::new("index");
    for c in enumerate_classes(budget.max_places, budget.max_denominator) {
        let engine = global_index(&c);
        if engine.to_u64().is_none_or(|e| e > budget.max_index) {
            continue;
        }
        match oracle_index(&c, budget) {
            Ok(o) => check.case(engine == o.into() && c.period() == engine, || {
                format!("index-mismatch: {c:?} engine {engine} oracle {o}")
            }),
            Err(e) => return check.exceeded(e.to_string()),
        }
    }
    check.report
}

fn check_restriction(budget: &EnumerationBudget) -> CheckReport {
    let mut check = Check::new("restriction");
    let places = budget.max_places.min(2);
    for c in enumerate_classes(places, budget.max_denominator) {
        let index = global_index(&c);
        if index.to_u64().is_none_or(|e| e > budget.max_index) {
            continue;
        }
        let labels: Vec<&String> = c.support().keys().collect();
        for degree in 1..=budget.max_degree {
            let shapes: Vec<Vec<u64>> = partitions_desc(degree, degree).into_iter().filter(|p| p.len() <= 3).collect();
            let choices = labels.iter().map(|_| shapes.iter()).multi_cartesian_product();
            let choices: Vec<Vec<&Vec<u64>>> = if labels.is_empty() { vec![Vec::new()] } else { choices.collect() };
            for choice in choices {
                let e = labels.iter().zip(&choice).fold(FormalExtension::new(degree), |e, (l, shape)| {
                    e.with_local(l, (*shape).clone())
                });
                match global_restrict(&c, &e) {
                    Ok(r) => {
                        let expected = labels.iter().zip(&choice).all(|(l, shape)| {
                            let (a, n) = fraction(&c.invariant(l)).expect("small");
                            shape.iter().enumerate().all(|(j, d)| {
                                let (b, m) = fraction(&r.invariant(&format!("{l}.{}", j + 1))).expect("small");
                                let scaled = (a as u128 * *d as u128 % n as u128) as u64;
                                b as u128 * n as u128 == scaled as u128 * m as u128
                            })
                        });
                        let divides = (&index % r.index()) == 0u32.into();
                        check.case(expected && divides, || format!("restriction-mismatch: {c:?} along {e:?}"));
                    }
                    Err(err) => check.case(false, || format!("restriction-error: {err}")),
                }
            }
        }
    }
    check.report
}

fn check_variety_index(budget: &EnumerationBudget) -> CheckReport {
    let mut check = Check::new("variety-index");
    for n in 1..=budget.max_index {
        let a = AlgebraDescriptor::abstract_algebra(n, n, None, None).expect("valid");
        let mut flag_sets: Vec<Vec<u64>> = (1..n).map(|r| vec![r]).collect();
        if n <= 36 {
            for r in 1..n {
                for s in r + 1..n {
                    flag_sets.push(vec![r, s]);
                }
            }
        }
        for flags in flag_sets {
            let x = FlagDescriptor::new(a.clone(), flags.clone()).expect("valid flags");
            let brute = (1..=n).rev().find(|g| n % g == 0 && flags.iter().all(|f| f % g == 0)).expect("1 divides");
            let (gi, vi) = (generic_index(&x), variety_index(&x));
            check.case(gi == brute && gi * vi == n, || format!("variety-index: n={n} flags={flags:?} got {gi}*{vi}"));
        }
    }
    check.report
}

fn check_torsion(budget: &EnumerationBudget, engine: &TorsionEngine) -> CheckReport {
    let mut check = Check::new("torsion-rules");
    let none = Hypotheses::none();
    for n in 1..=budget.max_index {
        let exponents: Vec<u64> = (1..=n).filter(|e| n % e == 0 && same_radical(*e, n)).collect();
        for &exp in [exponents[0], n].iter().collect::<BTreeSet<_>>() {
            for char_flag in [None, Some(false)] {
                let a = AlgebraDescriptor::abstract_algebra(n, exp, None, char_flag).expect("valid");
                for r in 1..n {
                    let x = FlagDescriptor::new(a.clone(), vec![r]).expect("valid");
                    let d = euclid(n, r);
                    for kind in [BaseKind::Abstract, BaseKind::Global] {
                        let want = expected_rules(n, exp, d, char_flag, kind);
                        let want_exp = want.iter().fold(0, |g, (_, e)| euclid(g, *e));
                        match engine.bound(&x, Some(kind), &none) {
                            Ok(b) => {
                                let got: Vec<(Rule, u64)> = b.rules.iter().map(|r| (r.id, r.exponent)).collect();
                                check.case(got == want && b.exponent == want_exp, || {
                                    format!("rule-mismatch: n={n} exp={exp} r={r} {kind}: got {got:?}, want {want:?}")
                                });
                            }
                            Err(e) => check.case(false, || format!("torsion-error: {e}")),
                        }
                    }
                }
            }
        }
    }
    check.report
}

fn same_radical(a: u64, b: u64) -> bool {
    (2..=b).filter(|q| b % q == 0 && (2..*q).all(|s| q % s != 0)).all(|q| a % q == 0)
}

fn check_combination(budget: &EnumerationBudget) -> CheckReport {
    let mut check = Check::new("torsion-combination");
    for n in 2..=budget.max_index {
        let a = AlgebraDescriptor::abstract_algebra(n, n, None, None).expect("valid");
        for d in (1..n).filter(|d| n % d == 0) {
            let profile: Vec<(u64, u32, u32)> = (2..=n)
                .filter(|q| n % q == 0 && (2..*q).all(|s| q % s != 0))
                .map(|q| {
                    let val = |mut x: u64| {
                        let mut v = 0;
                        while x % q == 0 {
                            x /= q;
                            v += 1;
                        }
                        v
                    };
                    (q, val(n), val(d))
                })
                .collect();
            let combined = oracle_torsion_combination(&profile);
            let nf = normal_form(&FlagDescriptor::new(a.clone(), vec![d]).expect("valid"));
            let per_prime: u64 = nf.components.iter().map(|c| c.prime.pow(c.exponent)).product();
            check.case(combined == d && nf.d == d && per_prime == d, || {
                format!("combination-mismatch: n={n} d={d} oracle {combined} engine {per_prime}")
            });
        }
    }
    check.report
}

fn check_extension_counts(budget: &EnumerationBudget) -> CheckReport {
    let mut check = Check::new("extension-count");
    let primes: Vec<u64> = (2..=7u64.min(budget.max_index)).filter(|q| (2..*q).all(|s| q % s != 0)).collect();
    for &p in &primes {
        for &r in &primes {
            for f in 1.. {
                let q = r.pow(f);
                if q > 49 {
                    break;
                }
                for field_char in [0, r] {
                    let mut field = LocalField::non_archimedean(r, q, field_char).expect("valid");
                    if r == p && field_char == 0 && p != 2 {
                        field = field.with_zeta_flag(p, false).expect("valid");
                    }
                    let count = field.count_degree_p_extensions(p);
                    let ok = match &count {
                        Ok(ExtensionCount::Infinite) => field_char == p,
                        Ok(ExtensionCount::AtLeast(n)) => *n > p,
                        Err(_) => false,
                    };
                    check.case(ok, || format!("count: p={p} q={q} char={field_char}: {count:?}"));
                    if field.counting_case(p).ok() == Some(CountingCase::UnramifiedPlusEisenstein) {
                        let cat = field.catalog_degree_p_extensions(p, p + 1).unwrap_or_default();
                        let distinct: BTreeSet<_> = cat.iter().collect();
                        check.case(cat.len() as u64 == p + 1 && distinct.len() == cat.len(), || {
                            format!("catalog: p={p} q={q}: {cat:?}")
                        });
                    }
                }
            }
        }
    }
    check.report
}

fn check_lemma(budget: &EnumerationBudget) -> CheckReport {
    let mut check = Check::new("extension-lemma");
    for f in lemma_fixtures() {
        let index = f.p.pow(f.m);
        if index > budget.max_index || f.class.support().len() > budget.max_places || f.p > budget.max_degree {
            continue;
        }
        match construct_extension_lemma(&f.class, &f.l0, &f.l1) {
            Ok(cert) => match oracle_lemma_search(&f.class, &cert.l0, &cert.l1, f.p, budget) {
                Ok(set) => {
                    let mine = pattern_of(&f.class, &cert.extension);
                    check.case(!set.is_empty() && set.contains(&mine), || {
                        format!("lemma-mismatch: {} ({} admissible)", f.name, set.len())
                    });
                }
                Err(e) => return check.exceeded(e.to_string()),
            },
            Err(e) => check.case(false, || format!("lemma-error: {}: {e}", f.name)),
        }
    }
    check.report
}

fn check_chains(budget: &EnumerationBudget) -> CheckReport {
    let mut check = Check::new("equivalence-chain");
    for f in chain_fixtures() {
        if f.p.pow(f.m) > budget.max_index {
            continue;
        }
        for (a, b) in f.pairs() {
            let outcome = f.registry().and_then(|mut r| r.build_chain(f.k, &a, &b));
            match outcome {
                Ok(chain) => {
                    let v = validate_chain(&chain);
                    let ends = chain.nodes.first().map(|n| &n.id) == Some(&a) && chain.nodes.last().map(|n| &n.id) == Some(&b);
                    let decreasing = chain.measure_trace.iter().all(|(p, c)| c < p);
                    check.case(v.valid && ends && decreasing, || {
                        format!("chain-invalid: {} {a}-{b}: {:?}", f.name, v.diagnostics)
                    });
                }
                Err(e) => check.case(false, || format!("chain-error: {} {a}-{b}: {e}", f.name)),
            }
        }
    }
    check.report
}

/// Runs every oracle-versus-engine comparison within `budget`.
pub fn run_suite(budget: &EnumerationBudget, engine: &TorsionEngine) -> Result<SuiteReport> {
    budget.validate()?;
    let over = budget.over_ceiling();
    let mut checks = Vec::new();
    if over.is_empty() {
        checks.push(check_index(budget));
        checks.push(check_restriction(budget));
        checks.push(check_variety_index(budget));
        checks.push(check_torsion(budget, engine));
        checks.push(check_combination(budget));
        checks.push(check_extension_counts(budget));
        checks.push(check_lemma(budget));
        checks.push(check_chains(budget));
    } else {
        checks.push(Check::new("budget").exceeded(format!("above ceiling: {}", over.join(", "))));
    }
    let budget_exceeded = checks.iter().any(|c| c.budget_exceeded);
    let passed = checks.iter().all(|c| c.passed) && !budget_exceeded;
    Ok(SuiteReport { passed, budget_exceeded, budget: *budget, checks })
}
