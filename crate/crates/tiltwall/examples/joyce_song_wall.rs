//! The Joyce-Song wall of a shifted class `v_n = v − [O(−n)]`, its
//! exact chord endpoints `−n` and `n + 2s/c`, and the safe line whose
//! chord-length balance keeps the descent induction inside `U`.
//!
//! Run with `cargo run -p tiltwall --example joyce_song_wall`.

use tiltwall::plane::{parabola_roots, PlanePoint};
use tiltwall::rat::{rat, rint};
use tiltwall::threefold::{KClass, ThreefoldModel};
use tiltwall::walls::{in_safe_area, js_wall, safe_line, safe_slope, WallsError};

fn main() {
    let x = ThreefoldModel::quintic();
    let v = KClass::new(0, rint(1), rat(-1, 2), rat(1, 6));

    // Shift by O(−10): the numerical class of complexes [O(−10) → F].
    let n = rint(10);
    let w_n = &v - &KClass::line_bundle(&-&n);
    println!("w_n = v − [O(−10)] = {w_n}");

    let wall = js_wall(&w_n, &n, &x).unwrap();
    println!("JS wall: {}  (slope {})", wall.line, wall.slope);
    let (b1, b2) = parabola_roots(&wall.line).unwrap();
    println!("chord endpoints: b₁ = {b1} = −n, b₂ = {b2} = n + 2s/c");

    // The wall's canonical decomposition has the rank-0 part v and the
    // rank −1 part −[O(−n)], with the primed invariants recorded.
    let dec = &wall.decompositions[0];
    println!("decomposition: v0 = {}, v1 = {}", dec.v0, dec.v1);
    println!(
        "primed invariants: c′ = {}, s′ = {}, d′ = {}",
        dec.c_prime.clone().unwrap(),
        dec.s_prime.clone().unwrap(),
        dec.d_prime.clone().unwrap()
    );

    // For a degree-1 parent the safe line *is* the Joyce-Song wall:
    // Δ̄(w_n) = 2c² forces the balanced chord.
    let cap = v.c.clone();
    let safe = safe_line(&w_n, &cap, &x).unwrap();
    println!("\nsafe line with cap c = {cap}: {safe}");
    assert_eq!(safe, wall.line);

    // Membership in the safe area is a strict two-inequality test.
    let hi = PlanePoint::new(rint(0), rint(46));
    let lo = PlanePoint::new(rint(0), rint(40));
    println!(
        "{hi} safe: {}   {lo} safe: {}",
        in_safe_area(&hi, &w_n, &cap, &x).unwrap(),
        in_safe_area(&lo, &w_n, &cap, &x).unwrap()
    );

    // Under a deeper induction stage (degree-5 parent, so cap c = 5)
    // the balanced chord of the same discriminant has irrational
    // endpoints: the exact slope lives in a quadratic extension and no
    // integer-coefficient line realizes it.
    let wide = KClass::new(-1, rint(12), rat(-111, 2), rat(1111, 6));
    let cap5 = rint(5);
    println!("\nΔ̄ = {} with cap c = {cap5}:", wide.delta_reduced());
    let mu = safe_slope(&wide, &cap5, &x).unwrap();
    println!("safe slope = {mu}");
    println!("          ≈ {}", mu.to_decimal(30));
    match safe_line(&wide, &cap5, &x) {
        Err(WallsError::IrrationalSafeSlope(q)) => {
            println!("safe_line correctly refuses: the slope {q} is irrational")
        }
        other => panic!("expected an irrational safe slope, got {other:?}"),
    }
}
