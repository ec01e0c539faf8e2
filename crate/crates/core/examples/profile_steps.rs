use std::io::Write;
use std::time::Instant;

use distinv_core::catalog;
use distinv_core::manifold::lie_bracket;
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
    let x3 = step!("x3", lie_bracket(&spec.x1, &spec.x2).unwrap());
    let x4 = step!("x4", lie_bracket(&spec.x1, &x3).unwrap());
    let x5 = step!("x5", lie_bracket(&spec.x2, &x3).unwrap());
    for (n, f) in [("x3", &x3), ("x4", &x4), ("x5", &x5)] {
        let t: usize = f.coef.iter().map(|e| e.num.terms().len() + e.den.terms().len()).sum();
        println!("{n} terms: {t}");
    }
    let frame = step!("frame", distinv_core::manifold::build_adapted_frame(&spec, true).unwrap());
    let csz: usize = frame.c.iter().flatten().flatten().map(|e| e.num.terms().len()).sum();
    println!("c total terms: {csz}");
}
