use sbflag_core::equiv_chain::validate_chain;
use sbflag_core::fixtures::{chain_fixtures, lemma_fixtures};
use sbflag_core::global_brauer::construct_extension_lemma;

#[test]
fn every_lemma_fixture_constructs() {
    for f in lemma_fixtures() {
        let cert = construct_extension_lemma(&f.class, &f.l0, &f.l1).unwrap_or_else(|e| panic!("{}: {e}", f.name));
        let top = f.p.pow(f.m);
        assert_eq!(cert.index_k, top / f.p, "{}", f.name);
        assert_eq!(cert.index_kl0, top / f.p / f.p, "{}", f.name);
    }
}

#[test]
fn every_chain_fixture_connects() {
    for f in chain_fixtures() {
        for (a, b) in f.pairs() {
            let mut r = f.registry().unwrap();
            let chain = r.build_chain(f.k, &a, &b).unwrap_or_else(|e| panic!("{} {a}-{b}: {e}", f.name));
            let v = validate_chain(&chain);
            assert!(v.valid, "{} {a}-{b}: {:?}", f.name, v.diagnostics);
            assert!(chain.measure_trace.iter().all(|(p, c)| c < p));
        }
    }
}
