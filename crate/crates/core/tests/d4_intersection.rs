use std::sync::OnceLock;
use std::time::Instant;

use a4_core::exact::int;
use a4_core::fan::d4::{build_star_fan, compute_stabilizer, D4Fan};
use a4_core::intersection::{build_relations, DivisorMonomial, MultiplierSet, RecursiveEvaluator, SolvedSystem};
use num_traits::Zero;

fn fan() -> &'static D4Fan {
    static FAN: OnceLock<D4Fan> = OnceLock::new();
    FAN.get_or_init(|| build_star_fan().unwrap())
}

fn solved() -> &'static SolvedSystem {
    static SYS: OnceLock<SolvedSystem> = OnceLock::new();
    SYS.get_or_init(|| {
        let t = Instant::now();
        let s = SolvedSystem::for_fan(&fan().star, MultiplierSet::FacePowers).unwrap();
        eprintln!("assembled and solved in {:?}: {:?}", t.elapsed(), s.diagnostics());
        s
    })
}

#[test]
fn e10_from_the_linear_system() {
    let s = solved();
    let d = s.diagnostics();
    assert!(d.center_power_determined);
    assert_eq!(s.center_power_value().unwrap(), int(-1680));
}

#[test]
fn e10_from_the_recursive_evaluator() {
    let mut ev = RecursiveEvaluator::new(&fan().star);
    let e10 = DivisorMonomial::center_power(13, 10);
    assert_eq!(ev.evaluate(&e10).unwrap(), int(-1680));
}

#[test]
fn engines_agree_on_every_unknown() {
    let s = solved();
    let t = Instant::now();
    let mut ev = RecursiveEvaluator::new(&fan().star);
    for (col, u) in s.system.unknowns.iter().enumerate() {
        assert!(s.solution.determined[col]);
        assert_eq!(ev.evaluate(u).unwrap(), s.solution.values[col], "{u}");
    }
    eprintln!("cross-check {:?}, cache {}", t.elapsed(), ev.cached());
}

#[test]
fn relations_vanish_for_every_row() {
    let s = solved();
    let star = &fan().star;
    let rels = build_relations(star);
    let mut ev = RecursiveEvaluator::new(star);
    for (j, m) in &s.system.row_origins {
        let mut total = a4_core::exact::Rational::zero();
        for (ray, c) in rels[*j].coefficients.iter().enumerate() {
            total += ev.evaluate(&m.times(ray)).unwrap() * c;
        }
        assert!(total.is_zero(), "relation {j} times {m}");
    }
}

#[test]
fn values_are_stabilizer_invariant() {
    let f = fan();
    let stab = compute_stabilizer(f).unwrap();
    let s = solved();
    let mut ev = RecursiveEvaluator::new(&f.star);
    for (k, u) in s.system.unknowns.iter().enumerate().step_by(97) {
        let v = ev.evaluate(u).unwrap();
        for g in stab.elements.iter().skip(k % 7).step_by(53) {
            let image = u.permute(&g.star_permutation());
            assert_eq!(ev.evaluate(&image).unwrap(), v, "{u} -> {image}");
        }
    }
}
