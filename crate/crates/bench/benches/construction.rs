use criterion::{black_box, criterion_group, criterion_main, Criterion};
use sbflag_core::csa::AlgebraDescriptor;
use sbflag_core::fixtures::{chain_fixtures, lemma_fixtures};
use sbflag_core::global_brauer::construct_extension_lemma;
use sbflag_core::oracle::{enumerate_classes, oracle_index, EnumerationBudget};
use sbflag_core::sb_calculus::{Hypotheses, TorsionEngine};
use sbflag_core::FlagDescriptor;

fn lemma(c: &mut Criterion) {
    let fixtures = lemma_fixtures();
    c.bench_function("extension lemma, 18 fixtures", |b| {
        b.iter(|| {
            for f in &fixtures {
                black_box(construct_extension_lemma(&f.class, &f.l0, &f.l1).unwrap());
            }
        })
    });
}

fn chain(c: &mut Criterion) {
    let f = chain_fixtures().into_iter().find(|f| f.name == "p2-m3-k1").unwrap();
    let registry = f.registry().unwrap();
    c.bench_function("chain p2-m3-k1 L00-L11", |b| {
        b.iter(|| black_box(registry.clone().build_chain(f.k, "L00", "L11").unwrap()))
    });
}

fn index_scan(c: &mut Criterion) {
    let classes = enumerate_classes(2, 12);
    let budget = EnumerationBudget::default();
    c.bench_function("oracle index, two-place classes", |b| {
        b.iter(|| {
            for class in &classes {
                black_box(oracle_index(class, &budget).unwrap());
            }
        })
    });
}

fn torsion(c: &mut Criterion) {
    let engine = TorsionEngine::new();
    let hyp = Hypotheses::none();
    let flags: Vec<FlagDescriptor> = [(360u64, 12u64), (256, 16), (210, 6), (72, 4)]
        .iter()
        .map(|&(n, r)| FlagDescriptor::new(AlgebraDescriptor::abstract_algebra(n, n, None, None).unwrap(), vec![r]).unwrap())
        .collect();
    c.bench_function("torsion bound", |b| {
        b.iter(|| {
            for x in &flags {
                black_box(engine.bound(x, None, &hyp).unwrap());
            }
        })
    });
}

criterion_group!(benches, lemma, chain, index_scan, torsion);
criterion_main!(benches);
