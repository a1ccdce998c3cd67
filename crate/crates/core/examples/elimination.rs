//! Two small systems solved by hand in the literature, reduced here to a
//! single unknown and split on rational roots.
//!
//! For three squares, with `f(3) = 3` known, the relations at 6, 9, 11 and
//! 22 collapse to a quadratic in `f(2)`. For six squares, three relations
//! between `f(4)`, `f(9)` and `f(16)` collapse to a quadratic in `f(4)`.
//!
//! ```text
//! cargo run --example elimination
//! ```

use ksquares::arith::{int, prime_powers_up_to, PartialFunction, Poly};
use ksquares::engine::{
    eliminate, eliminate_polys, push_equations_for, rational_roots, BranchState, Elimination,
    Limits, System,
};

fn site_namer(pf: &PartialFunction) -> impl Fn(ksquares::arith::Symbol) -> String + '_ {
    move |s| format!("f({})", pf.site_of(s).value())
}

fn show(pf: &PartialFunction, found: Option<Elimination>) {
    match found {
        Some(Elimination::Univariate { poly, sources, .. }) => {
            let roots = rational_roots(&poly).expect("nonzero eliminant");
            let roots: Vec<String> = roots.iter().map(ToString::to_string).collect();
            println!(
                "  eliminant {} = 0 from equations {sources:?}",
                poly.display_with(site_namer(pf))
            );
            println!("  rational roots {{{}}}", roots.join(", "));
        }
        other => println!("  no eliminant: {other:?}"),
    }
}

fn main() {
    let mut pf = PartialFunction::new();
    for s in prime_powers_up_to(22) {
        pf.register(s);
    }
    pf.assign(3, int(3)).unwrap();
    let mut equations = Vec::new();
    for n in [6, 9, 11, 22] {
        push_equations_for(3, n, &mut pf, 64, &mut equations);
    }
    println!("three squares, n in {{6, 9, 11, 22}} with f(3) = 3:");
    for e in &equations {
        println!(
            "  {} = 0    [{}]",
            e.poly.display_with(site_namer(&pf)),
            e.provenance
        );
    }
    let system = System::custom(pf, equations, 22, Limits::default());
    let mut state = BranchState::new(&system);
    state.propagate(&|| true).unwrap();
    show(&state.pf, eliminate(&state, Limits::default()));

    let mut pf = PartialFunction::new();
    for s in prime_powers_up_to(16) {
        pf.register(s);
    }
    let x = |pf: &mut PartialFunction, q: u64| pf.evaluate(q);
    let (x4, x9, x16) = (x(&mut pf, 4), x(&mut pf, 9), x(&mut pf, 16));
    let c = |v: i64| Poly::constant(int(v));
    let polys = [
        &(&x16 - &x4.scale(&int(5))) + &c(4),
        &(&x9.scale(&int(3)) - &x4.scale(&int(8))) + &c(5),
        &(&(&c(4) + &(&x4 * &x9)) - &x4) - &x9.scale(&int(4)),
    ];
    println!("six squares, relations between f(4), f(9), f(16):");
    for p in &polys {
        println!("  {} = 0", p.display_with(site_namer(&pf)));
    }
    let pending: Vec<(usize, &Poly, bool)> = polys
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p, true))
        .collect();
    show(&pf, eliminate_polys(&pending, Limits::default()));
}
