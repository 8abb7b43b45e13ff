use manin::characters::{chars_of_conductor, enumerate_chars, q2_quadratic};

fn main() {
    for p in [2u64, 3, 5] {
        let counts: Vec<usize> = (0..=3).map(|a| chars_of_conductor(p, a).len()).collect();
        println!("p = {p}: characters of conductor 0..=3: {counts:?} (total at level 3: {})", enumerate_chars(p, 3).len());
    }
    for mask in [2u8, 4, 6] {
        let chi = q2_quadratic(mask);
        println!("{chi}: conductor {}", chi.conductor());
    }
}
