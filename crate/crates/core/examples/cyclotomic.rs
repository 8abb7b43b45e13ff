use manin::cyclotomic::{sqrt_prime, CycNum};

fn main() {
    let i = CycNum::root(4, 1);
    println!("i^2 = {}", &i * &i);
    let r = sqrt_prime(5);
    println!("sqrt(5) = {r}");
    println!("sqrt(5)^2 = {}", &r * &r);
    let (re, im) = r.complex_embed(20).to_f64();
    println!("embedded: {re:.12} + {im:.12}i");
}
