use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use hjelmslev::appendix::ENTRIES;
use hjelmslev::arcsearch::{arc_graph, classify, Arc, SearchOptions};
use hjelmslev::canon::canonical_form;
use hjelmslev::codes::{code_report, parse_arc_file};
use hjelmslev::geometry::Geometry;
use hjelmslev::ring::{ring, RingName};

fn canon(c: &mut Criterion) {
    let z4 = Geometry::build(ring(RingName::Z4), 2).unwrap();
    let mut arc = Arc::empty(&z4);
    for p in [0, 5, 11, 17, 23] {
        arc.add_point(&z4, p);
    }
    let g = arc_graph(&z4, &arc, 2);
    c.bench_function("canonical_form/Z4 plane, 5-point arc", |b| b.iter(|| canonical_form(&g)));

    let g42 = Geometry::build(ring(RingName::G42), 2).unwrap();
    let g = arc_graph(&g42, &Arc::empty(&g42), 2);
    c.bench_function("canonical_form/G42 plane, empty arc", |b| b.iter(|| canonical_form(&g)));
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    group.sample_size(10);
    let z4 = Geometry::build(ring(RingName::Z4), 2).unwrap();
    group.bench_function("Z4 plane u=3", |b| b.iter(|| classify(&z4, 3, &SearchOptions::default()).unwrap()));
    let s32 = Geometry::build(ring(RingName::S32), 2).unwrap();
    group.bench_function("S32 plane u=2", |b| b.iter(|| classify(&s32, 2, &SearchOptions::default()).unwrap()));
    group.finish();
}

fn codes(c: &mut Criterion) {
    let mut group = c.benchmark_group("code_report");
    group.sample_size(10);
    for e in ENTRIES.iter().filter(|e| e.title.contains("Z8") || e.title.contains("G42")) {
        let f = parse_arc_file(e.text).unwrap();
        let geom = Geometry::build(ring(f.ring), f.k).unwrap();
        let arc = f.resolve(&geom).unwrap();
        group.bench_function(e.title, |b| b.iter_batched(|| arc.clone(), |a| code_report(&geom, &a), BatchSize::SmallInput));
    }
    group.finish();
}

criterion_group!(benches, canon, search, codes);
criterion_main!(benches);
