use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use modaldoc::adjunction::{am_modality, factorize};
use modaldoc::bundled::{kripke_frames, presheaf_chain, quantales, set_fragment, trees};
use modaldoc::comonad::{em_doctrine, mc};
use modaldoc::instances::kripke::kripke_doctrine;
use modaldoc::instances::quantale::{bang_law_suite, quantale_doctrine};
use modaldoc::temporal::{gfp_modality, random_coalgebra, temporal_doctrine};
use modaldoc::{BranchLift, CoalgebraKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn interior_laws(c: &mut Criterion) {
    let (_, chain) = &kripke_frames()[0];
    let op = kripke_doctrine(chain, set_fragment(3)).unwrap().op;
    c.bench_function("interior laws, Kripke chain over sets of size 3", |b| b.iter(|| black_box(op.check())));
}

fn adjunctions(c: &mut Criterion) {
    let l3 = &quantales()[1];
    let inst = quantale_doctrine(l3, set_fragment(2)).unwrap();
    c.bench_function("am_modality, Łukasiewicz quantale", |b| {
        b.iter(|| black_box(am_modality(&inst.adjunction).unwrap()))
    });
    c.bench_function("factorize, Łukasiewicz quantale", |b| b.iter(|| black_box(factorize(&inst.adjunction).unwrap())));
    c.bench_function("presheaf instance on the 2-chain", |b| b.iter(|| black_box(presheaf_chain().unwrap())));
    let inst3 = quantale_doctrine(l3, set_fragment(3)).unwrap();
    c.bench_function("bang laws, Łukasiewicz quantale over sets of size 3", |b| {
        b.iter(|| black_box(bang_law_suite(&inst3)))
    });
}

fn comonads(c: &mut Criterion) {
    let op = temporal_doctrine(trees(), BranchLift::Exists).unwrap().op;
    c.bench_function("em_doctrine of MC(EG)", |b| {
        b.iter_batched(|| mc(&op).unwrap(), |cm| black_box(em_doctrine(&cm).unwrap()), BatchSize::SmallInput)
    });
}

fn temporal(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let coalgebras: Vec<_> = (0..32)
        .map(|i| random_coalgebra(&mut rng, format!("T{i}"), CoalgebraKind::Tree, 8))
        .collect();
    c.bench_function("EG fixed points on 32 random trees, every subset", |b| {
        b.iter(|| {
            for t in &coalgebras {
                for a in 0..=t.full() {
                    black_box(gfp_modality(t, BranchLift::Exists, a).unwrap());
                }
            }
        })
    });
}

criterion_group!(benches, interior_laws, adjunctions, comonads, temporal);
criterion_main!(benches);
