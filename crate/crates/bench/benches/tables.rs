use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use gtab_core::burnside::table_of_marks;
use gtab_core::canonical::canonical_character_table;
use gtab_core::chartab::character_table;
use gtab_core::globalrep::global_table;
use gtab_core::knutson::{
    knutson_index_ring, marked_ring_from_character_table, verify_splitting_theorem,
};
use gtab_core::named::named_group;
use gtab_core::subgroup::{all_subgroups, Subgroup};

fn bench_subgroups(c: &mut Criterion) {
    c.bench_function("subgroups_d8", |b| {
        b.iter(|| {
            let g = named_group("D8").unwrap();
            all_subgroups(&g).unwrap().len()
        })
    });
    c.bench_function("subgroups_s4", |b| {
        b.iter(|| {
            let g = named_group("S4").unwrap();
            all_subgroups(&g).unwrap().len()
        })
    });
}

fn bench_marks(c: &mut Criterion) {
    c.bench_function("table_of_marks_s4", |b| {
        b.iter(|| {
            let g = named_group("S4").unwrap();
            table_of_marks(&g).unwrap().n()
        })
    });
}

fn bench_chartab(c: &mut Criterion) {
    c.bench_function("character_table_sl23", |b| {
        b.iter(|| {
            let g = named_group("SL(2,3)").unwrap();
            character_table(&g).unwrap().k()
        })
    });
    c.bench_function("canonical_chartab_q8", |b| {
        let g = named_group("Q8").unwrap();
        let ct = character_table(&g).unwrap();
        b.iter(|| canonical_character_table(&ct).unwrap().digest())
    });
}

fn bench_globaltab(c: &mut Criterion) {
    c.bench_function("global_table_d8_center", |b| {
        b.iter(|| {
            let g = named_group("D8").unwrap();
            let r2 = g.generators()[0].pow(2);
            let n = Subgroup::generated(&g, &[r2]).unwrap();
            global_table(&g, &n).unwrap().n_rows()
        })
    });
}

fn bench_knutson(c: &mut Criterion) {
    c.bench_function("knutson_ring_a4_char", |b| {
        let g = named_group("A4").unwrap();
        let ring = marked_ring_from_character_table(&character_table(&g).unwrap());
        let gens: Vec<Vec<BigInt>> = (0..ring.n())
            .map(|i| {
                let mut v = vec![BigInt::zero(); ring.n()];
                v[i] = BigInt::one();
                v
            })
            .collect();
        b.iter(|| knutson_index_ring(&ring, &gens).unwrap())
    });
    c.bench_function("split_check_sl23_center", |b| {
        let g = named_group("SL(2,3)").unwrap();
        let n = Subgroup::generated(&g, &g.center_elements().unwrap()).unwrap();
        b.iter(|| verify_splitting_theorem(&g, &n).unwrap().theorem_consistent)
    });
}

criterion_group!(
    benches,
    bench_subgroups,
    bench_marks,
    bench_chartab,
    bench_globaltab,
    bench_knutson
);
criterion_main!(benches);
