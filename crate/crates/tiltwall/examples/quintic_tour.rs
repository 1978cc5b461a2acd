//! First steps: the quintic threefold model, numerical K-theory classes
//! in normalized coordinates, and the exact Euler-characteristic
//! toolkit built on Riemann-Roch.
//!
//! Run with `cargo run -p tiltwall --example quintic_tour`.

use tiltwall::hilbert::HilbertPolynomial;
use tiltwall::rat::{rat, rint};
use tiltwall::threefold::{KClass, ThreefoldModel};

fn main() {
    let x = ThreefoldModel::quintic();
    println!(
        "model `{}`: H³ = {}, c₂·H = {}, #H²_tors = {}, c_min = {}",
        x.name, x.h3, x.c2h, x.tors, x.cmin
    );

    // χ(O(n)) recovers the classical values 0, 5, 15, 35, ... (zero at
    // n = 0: the structure sheaf of a Calabi-Yau threefold).
    print!("χ(O(n)) for n = 0..6:");
    for n in 0..=6 {
        print!(" {}", x.euler(&KClass::line_bundle(&rint(n))));
    }
    println!();

    // The structure sheaf of a degree-1 hyperplane section D ⊂ X, the
    // running example class v = ch_H(O_D) = (0, 1, −1/2, 1/6).
    let v = KClass::new(0, rint(1), rat(-1, 2), rat(1, 6));
    println!("\nv = ch(O_D) = {v}");
    println!("  integral lattice check: {}", x.integrality_check(&v));
    println!("  Δ̄(v) = c² − 2rs = {}", v.delta_reduced());
    println!("  χ(v) = {}", x.euler(&v));
    println!("  χ(v(10)) = {}", x.euler_twisted(&v, &rint(10)));

    // The signed pairing χ̄ = (−1)^{χ−1}χ that appears as a
    // wall-crossing coefficient: χ(v(10)) = 230 is even, so χ̄ = −230.
    let twisted = v.twist(&rint(10));
    println!(
        "  χ̄(v(10)) = {}",
        x.chi_bar(&KClass::line_bundle(&rint(0)), &twisted).unwrap()
    );

    // The Euler pairing is antisymmetric on a Calabi-Yau threefold.
    let o3 = KClass::line_bundle(&rint(3));
    println!(
        "\nantisymmetry: χ(O(3), v) = {}, χ(v, O(3)) = {}",
        x.euler_pair(&o3, &v),
        x.euler_pair(&v, &o3)
    );

    // Hilbert polynomials order classes the Gieseker way.
    let h = HilbertPolynomial::of(&x, &v).unwrap();
    println!("\nHilbert polynomial of v: {h}");
    println!("  reduced:   {}", h.reduced());
    println!("  truncated: {}", h.truncated());

    // A stable pair I• = [O → F] with ch(F) = (0, 0, β·H, m) = (0,0,1,2)
    // and its dual-shift E = (I•)^∨[1] ⊗ O(−5), the rank −1 side of the
    // large-volume bridge.
    let (pair, dual_shift) = x.stable_pair_class(&rint(1), &rint(2), &rint(5));
    println!("\nstable pair (β·H, χ) = (1, 2):");
    println!("  ch(I•)        = {pair}");
    println!("  ch(E ⊗ O(-5)) = {dual_shift}");
}
