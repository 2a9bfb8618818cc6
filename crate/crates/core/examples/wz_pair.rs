//! The q-WZ pair of each scheme: closedness and the potential relations.

use qapery::scheme::{check_closed, check_potential, form_f, form_g, grid_failures, potential_c, SchemeId};

fn main() {
    for s in SchemeId::ALL {
        println!("[{s}]");
        println!("F(1,1) = {}", form_f(s, 1, 1));
        println!("G(1,1) = {}", form_g(s, 1, 1));
        println!("c(1,1) = {}", potential_c(s, 1, 1));
        let closed = grid_failures(8, 8, |n, k| check_closed(s, n, k));
        let potential = grid_failures(8, 8, |n, k| check_potential(s, n, k));
        println!("closedness failures on 9x9 grid: {}", closed.len());
        println!("potential failures on 9x9 grid: {}", potential.len());
    }
}
