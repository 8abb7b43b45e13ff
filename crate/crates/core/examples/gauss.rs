use manin::characters::{chars_of_conductor, AdditiveChar, FiniteFieldChar};
use manin::gauss::{eps_factor, finite_field_gauss, gauss_closed_form, q2_eps_table, stickelberger_val};
use manin::padic::valuation_of_cyc;

fn main() {
    for (mask, eps) in q2_eps_table() {
        println!("ε(½, mask {mask}) = {eps}");
    }
    for chi in FiniteFieldChar::all(3, 2) {
        let g = finite_field_gauss(&chi).unwrap();
        println!("F_9, α = {:?}: val = {}, digit sum / 2 = {}", chi, valuation_of_cyc(3, &g).unwrap(), stickelberger_val(&chi));
    }
    let chi = &chars_of_conductor(5, 2)[0];
    println!("{chi}: closed-form Gauss sum {}", gauss_closed_form(chi).unwrap().value);
    println!("ε = {}", eps_factor(chi, &AdditiveChar::standard(5)));
}
