use manin::dataset::{emit_bound_table, selftest, verify_dataset, TABLE1, TABLE2};

fn main() {
    for (name, t) in [("table1", TABLE1), ("table2", TABLE2)] {
        let s = verify_dataset(t).summary;
        println!("{name}: {} records, {} sharp, {} fail", s.records, s.sharp, s.fail);
    }
    for r in emit_bound_table(48, 2, 2).unwrap() {
        println!("valL {}: bound {}, threshold {}", r.val_l, r.bound, r.threshold);
    }
    println!("quick selftest passed: {}", selftest(true).passed());
}
