use manin::cyclotomic::CycNum;
use manin::padic::{default_precision, valuation_of_cyc};

fn main() {
    println!("precision B = {}", default_precision());
    for (p, m) in [(2u64, 8u64), (3, 9), (5, 25)] {
        let one_minus_zeta = &CycNum::one() - &CycNum::root(m, 1);
        let v = valuation_of_cyc(p, &one_minus_zeta).unwrap();
        println!("val_{p}(1 - ζ_{m}) = {v}");
    }
}
