use manin::ext::Q;
use manin::reps::RepDescriptor;
use manin::whittaker::{assemble_w, local_bound, CosetIndex};

fn main() {
    let pi: RepDescriptor = "type3:p=2,mu=b3".parse().unwrap();
    let a = pi.conductor();
    let sv = Q::from_integer(0.into());
    for t in -6..=2 {
        let idx = CosetIndex::at(a, t, a / 2);
        let w = assemble_w(&pi, &idx, &sv, true).unwrap();
        let b = local_bound(&pi, &idx, &sv).map(|b| b.value.to_string()).unwrap_or("-".into());
        println!("t = {t:>2}: val W = {:>5}, bound {b}", w.valuation.to_string());
    }
}
