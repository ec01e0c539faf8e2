use std::io::Write;
use std::time::Instant;

use distinv_core::catalog;
use distinv_core::cotangent::{co_bracket, Cotangent};
use distinv_core::invariants::{self, Eps1Style};
use distinv_core::manifold::build_adapted_frame;
use distinv_core::scalar::rat_i;

fn main() {
    macro_rules! step { ($name:expr, $e:expr) => {{
        let t = Instant::now();
        let r = $e;
        println!("{}: {:?}", $name, t.elapsed());
        std::io::stdout().flush().unwrap();
        r
    }}}
    let spec = step!("spec", catalog::rolling(rat_i(1), rat_i(2)).unwrap());
    let frame = step!("frame", build_adapted_frame(&spec, true).unwrap());
    let cot = step!("cot", Cotangent::new(frame).unwrap());
    let eps = step!("eps", invariants::choose_eps1(&cot, Eps1Style::PolarMinus).unwrap());
    let mut cur = eps.field.clone();
    for k in 1..=4 {
        let name = format!("ad^{k}");
        cur = step!(&name, co_bracket(&cot.h, &cur).unwrap());
        let terms: usize = cur.coef.iter().map(|e| e.num.terms().len() + e.den.terms().len()).sum();
        let deg: u32 = cur.coef.iter().map(|e| e.num.total_degree().max(e.den.total_degree())).max().unwrap_or(0);
        println!("   terms {terms} maxdeg {deg}");
    }
    let sol = step!("solve", invariants::solve_a0a1(&cot, &eps).unwrap());
    println!("A1 = {}", sol.a1);
}
