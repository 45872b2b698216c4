//! Sequential against rayon-backed execution on the two data-parallel hot
//! paths: batch round trips and pencil determinants by interpolation.
//! Without the `parallel` feature both variants run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stieltjes_star::corpus::{CentralMass, Corpus, CorpusBounds};
use stieltjes_star::matrixize::{build_pencil, pencil_det_with};
use stieltjes_star::roundtrip::batch_roundtrip;
use stieltjes_star::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn roundtrips(c: &mut Criterion) {
    let mut corpus = Corpus::new(7);
    let mut graphs = corpus.center_graphs(24, CentralMass::Any);
    graphs.extend(corpus.pendant_graphs(24, CentralMass::Any));
    let mut group = c.benchmark_group("batch_roundtrip");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, graphs.len()), &graphs, |b, gs| {
            b.iter(|| batch_roundtrip(black_box(gs), exec))
        });
    }
    group.finish();
}

fn pencils(c: &mut Criterion) {
    let bounds = CorpusBounds { max_edges: 8, max_masses: 6, ..CorpusBounds::default() };
    let g = Corpus::with_bounds(11, bounds).center_graph(CentralMass::Positive);
    let p = build_pencil(&g).expect("positive central mass");
    let mut group = c.benchmark_group("pencil_det");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, p.l.dim()), &p, |b, p| b.iter(|| pencil_det_with(black_box(p), exec)));
    }
    group.finish();
}

criterion_group!(benches, roundtrips, pencils);
criterion_main!(benches);
