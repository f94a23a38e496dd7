use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use infocap::enumeration::{DomainSpec, Enumerator, DEFAULT_BUDGET};
use infocap::equivariance::check_genericity_over;
use infocap::lattice::schema;
use infocap::mappings::{map_outdegle1_to_ssfree, map_t1_to_t6};
use infocap::Exec;

fn strategies() -> Vec<(&'static str, Exec)> {
    vec![
        ("sequential", Exec::Sequential),
        #[cfg(feature = "parallel")]
        ("parallel", Exec::Parallel),
    ]
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    for (name, s, n) in [("S0", "S0", 4), ("T1", "T1", 3), ("S15", "S15", 5)] {
        let sch = schema(s).unwrap();
        let dom = DomainSpec::new(n);
        for (label, exec) in strategies() {
            let en = Enumerator::new(DEFAULT_BUDGET, exec);
            group.bench_with_input(BenchmarkId::new(label, format!("{name}/n={n}")), &dom, |b, dom| {
                b.iter(|| en.enumerate(black_box(&sch), dom).unwrap().len())
            });
        }
    }
    group.finish();
}

fn counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("count");
    let sch = schema("S1").unwrap();
    let dom = DomainSpec::new(4);
    for (label, exec) in strategies() {
        let en = Enumerator::new(DEFAULT_BUDGET, exec);
        group.bench_function(BenchmarkId::new(label, "S1/n=4"), |b| b.iter(|| en.count(black_box(&sch), &dom).unwrap()));
    }
    group.finish();
}

fn genericity(c: &mut Criterion) {
    let mut group = c.benchmark_group("genericity");
    group.sample_size(20);
    for (name, map, n) in [("m", map_outdegle1_to_ssfree(), 4), ("f", map_t1_to_t6(), 3)] {
        let values = map.domain_values(n);
        let sources = Enumerator::default().enumerate_over(&map.source, &values).unwrap();
        for (label, exec) in strategies() {
            group.bench_function(BenchmarkId::new(label, format!("{name}/n={n}")), |b| {
                b.iter(|| check_genericity_over(&map, black_box(&sources), &values, exec).unwrap().passed())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, enumeration, counting, genericity);
criterion_main!(benches);
