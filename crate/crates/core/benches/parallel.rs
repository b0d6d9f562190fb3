//! Rayon pool versus a single-thread pool on the data-parallel kernels.
//! Build with `--no-default-features` to measure the plain sequential path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;

use fockalg::fock::TruncationCaps;
use fockalg::hochschild::{coboundary_matrix_via, required_max_degree, Route, SignRule};
use fockalg::operators::table_from_kernel;
use fockalg::sample::Sampler;
use fockalg::{extract_kernels, KernelFamily};

fn family() -> KernelFamily {
    Sampler::new(7).kernel_family(2, 3, 3, 8)
}

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let n = rayon::current_num_threads();
    let mut out = vec![("1-thread".to_string(), ThreadPoolBuilder::new().num_threads(1).build().unwrap())];
    if n > 1 {
        out.push((format!("{n}-threads"), ThreadPoolBuilder::new().num_threads(n).build().unwrap()));
    }
    out
}

fn tabulate(c: &mut Criterion) {
    let k = family();
    let caps = TruncationCaps::new(3, 3);
    let mut g = c.benchmark_group("table_from_kernel");
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(&name), |b| {
            pool.install(|| b.iter(|| table_from_kernel(&k, caps)))
        });
    }
    g.finish();
}

fn extract(c: &mut Criterion) {
    let caps = TruncationCaps::new(3, 3);
    let t = table_from_kernel(&family(), caps);
    let mut g = c.benchmark_group("extract_kernels");
    g.sample_size(20);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(&name), |b| pool.install(|| b.iter(|| extract_kernels(&t))));
    }
    g.finish();
}

fn coboundary_matrix(c: &mut Criterion) {
    let (r, l, m) = (2, 1, 1);
    let caps = TruncationCaps::new(2, required_max_degree(r, l, m));
    let mut g = c.benchmark_group("coboundary_matrix");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(&name), |b| {
            pool.install(|| b.iter(|| coboundary_matrix_via(Route::Table, r, l, m, caps, SignRule::Alternating).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, tabulate, extract, coboundary_matrix);
criterion_main!(benches);
