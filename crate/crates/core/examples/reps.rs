use manin::ext::q;
use manin::reps::{admissible_types, representatives};

fn main() {
    for p in [2u64, 3] {
        for n in 1..=4 {
            let kinds = admissible_types(p, n).unwrap();
            let reps = representatives(p, n, &[Some(q(1, 2))]).unwrap();
            println!("p = {p}, a = {n}: types {kinds:?}, {} representatives", reps.len());
        }
    }
    let pi: manin::reps::RepDescriptor = "type3:p=2,mu=b2".parse().unwrap();
    println!("{pi}: a(π) = {}, supercuspidal: {}", pi.conductor(), pi.is_supercuspidal());
}
