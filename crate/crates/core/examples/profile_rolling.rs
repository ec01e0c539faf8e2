use std::time::Instant;

use distinv_core::catalog;
use distinv_core::cotangent::{co_bracket, Cotangent};
use distinv_core::invariants::{self, Eps1Style};
use distinv_core::manifold::build_adapted_frame;
use distinv_core::scalar::rat_i;

fn main() {
    let t0 = Instant::now();
    let spec = catalog::rolling(rat_i(1), rat_i(2)).unwrap();
    println!("spec: {:?}", t0.elapsed());
    let t = Instant::now();
    let frame = build_adapted_frame(&spec, true).unwrap();
    println!("frame: {:?}", t.elapsed());
    let t = Instant::now();
    let cot = Cotangent::new(frame).unwrap();
    println!("cotangent: {:?}", t.elapsed());
    let t = Instant::now();
    let eps = invariants::choose_eps1(&cot, Eps1Style::PolarMinus).unwrap();
    let mut cur = eps.field.clone();
    for k in 1..=4 {
        let tk = Instant::now();
        cur = co_bracket(&cot.h, &cur).unwrap();
        let terms: usize = cur.coef.iter().map(|e| e.num.terms().len() + e.den.terms().len()).sum();
        println!("ad^{k}: {:?} (terms {terms})", tk.elapsed());
    }
    println!("chain total: {:?}", t.elapsed());
    let t = Instant::now();
    let sol = invariants::solve_a0a1(&cot, &eps).unwrap();
    println!("solve: {:?}  A1 = {}", t.elapsed(), sol.a1);
}
