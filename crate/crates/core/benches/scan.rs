use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use excov::except::Scanner;
use excov::exec::Exec;
use excov::gf::make_field;
use excov::pencil::pencil_scan_with;
use excov::projmap::{dickson, Poly};

fn bijectivity(c: &mut Criterion) {
    let base = make_field(5, 1).unwrap();
    let f = dickson(&base, 7, base.one()).unwrap();
    let mut group = c.benchmark_group("dickson7_over_f5");
    group.sample_size(10);
    for t in [6u32, 8] {
        for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            let scanner = Scanner::new(base.clone()).with_exec(exec);
            group.bench_with_input(BenchmarkId::new(name, t), &t, |b, &t| {
                b.iter(|| scanner.images(&f, t).unwrap());
            });
        }
    }
    group.finish();
}

fn pencil(c: &mut Criterion) {
    let field = make_field(499, 1).unwrap();
    let f = Poly::from_ints(&field, &[1, 3, 0, 7, 0, 2, 1]);
    let mut group = c.benchmark_group("pencil_p499");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_function(name, |b| b.iter(|| pencil_scan_with(&f, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bijectivity, pencil);
criterion_main!(benches);
