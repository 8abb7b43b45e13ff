use manin::modcurve::{cusp_table, total_cusps};

fn main() {
    let n = 72;
    println!("X_0({n}) has {} cusps", total_cusps(n));
    for row in cusp_table(n, Some(2)).unwrap() {
        let l = &row.local[0];
        println!(
            "L = {:>2}: width {:>2}, {} cusps, component ({},{}), d = {}, threshold {}",
            row.denominator, row.width, row.count, l.a, l.b, l.different, l.threshold
        );
    }
}
