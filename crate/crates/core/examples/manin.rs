use manin::manin::{integrality_check, manin_report, weight2_bound, Family, FactoredInt};

fn main() {
    let row: Vec<String> = (0..=8).map(|l| weight2_bound(2, 8, l).unwrap().to_string()).collect();
    println!("p = 2, val N = 8: {}", row.join(" "));
    println!("integrality at p = 5, val N = 2: {}", integrality_check(5, 2).unwrap().holds);
    for n in ["27", "2^5*3", "2^5*5"] {
        let level: FactoredInt = n.parse().unwrap();
        for r in manin_report(&level, &FactoredInt::from_u64(1).unwrap(), Family::X0) {
            println!("N = {n}, p = {}: val c ≤ {}", r.p, r.bound);
        }
    }
}
