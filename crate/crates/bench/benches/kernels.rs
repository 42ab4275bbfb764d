use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use sympinv::jet::{compose_many, invert_series};
use sympinv::signature::{signature_of, SamplePlan};
use sympinv::{ExprAst, Family, Flavor, Geometry, GroupElement, MultiJet, Rational, Submanifold};

fn jets(c: &mut Criterion) {
    let x = MultiJet::variable(3, 8, 0, 0.3);
    let y = MultiJet::variable(3, 8, 1, -0.7);
    let f = x.clone() * &y + &(x.clone() * &x);
    c.bench_function("multijet mul 3 vars order 8", |b| b.iter(|| black_box(&f).clone() * black_box(&f)));

    let s: Vec<MultiJet<f64>> = (0..3)
        .map(|i| MultiJet::from_fn(3, 6, |a| if a.iter().sum::<u8>() == 1 { f64::from(a[i]) } else { 0.1 }))
        .map(|j| j.with_constant(0.0))
        .collect();
    c.bench_function("invert_series 3 vars order 6", |b| b.iter(|| invert_series(black_box(&s)).unwrap()));
    let inv = invert_series(&s).unwrap();
    c.bench_function("compose_many 3 vars order 6", |b| b.iter(|| compose_many(black_box(&s), black_box(&inv)).unwrap()));

    let ast = ExprAst::parse_with_vars("(x^2 + x*y - 3)^3 * (y - 1/2)^2", &["x", "y"]).unwrap();
    let vars: Vec<MultiJet<Rational>> = (0..2).map(|i| MultiJet::variable(2, 6, i, Rational::new(1, 3))).collect();
    c.bench_function("rational jet of a polynomial, order 6", |b| b.iter(|| ast.eval(black_box(&vars)).unwrap()));
}

fn invariants(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (flavor, geometry) in [
        (Flavor::Sp, Geometry::Curve { n: 2 }),
        (Flavor::Sp, Geometry::Surface),
        (Flavor::ContactCSp, Geometry::ContactFunction),
    ] {
        let fam = Family::new(flavor, geometry).unwrap();
        let jet = sympinv::checks::generic_jet(fam, fam.order(), &mut rng).unwrap();
        c.bench_function(&format!("evaluate {}", fam.name()), |b| b.iter(|| fam.evaluate(black_box(&jet)).unwrap()));
        let g = GroupElement::random(flavor, geometry.n(), &mut rng);
        c.bench_function(&format!("pushforward {}", fam.name()), |b| {
            b.iter(|| g.pushforward(black_box(&jet), geometry).unwrap())
        });
    }
}

fn signatures(c: &mut Criterion) {
    let fam = Family::new(Flavor::Sp, Geometry::Curve { n: 1 }).unwrap();
    let sub = Submanifold::graph(Geometry::Curve { n: 1 }, &["x"], &["x^3 + x"]).unwrap();
    let plan = SamplePlan::default();
    c.bench_function("signature of a plane cubic, 64 samples", |b| {
        b.iter(|| signature_of(black_box(&sub), fam, &plan, 1, 1).unwrap())
    });
}

criterion_group!(benches, jets, invariants, signatures);
criterion_main!(benches);
