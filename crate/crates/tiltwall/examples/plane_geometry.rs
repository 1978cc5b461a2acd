//! The `(b, w)`-plane: the parameter space `U = {w > b²/2}` of weak
//! stability conditions, the projection `Π`, exact lines through
//! rational points, and quadratic-irrational chord endpoints.
//!
//! Run with `cargo run -p tiltwall --example plane_geometry`.

use tiltwall::plane::{
    in_u, line_through, parabola_roots, pi, pi_prime, point_side, segment_contains_integer_b,
    PlanePoint, Side,
};
use tiltwall::rat::{rat, rint};
use tiltwall::threefold::KClass;

fn main() {
    // Line bundles project onto the parabola: Π(O(n)) = (n, n²/2).
    for n in [-2i64, 0, 3] {
        let p = pi(&KClass::line_bundle(&rint(n))).unwrap();
        println!("Π(O({n})) = {p}   in U: {}", in_u(&p));
    }

    // A rank −1 class sits below the parabola; the chord to a
    // line-bundle point is a candidate wall.
    let w10 = KClass::new(-1, rint(11), rat(-101, 2), rat(1001, 6));
    let p = pi(&w10).unwrap();
    println!("\nΠ(v − O(−10)) = {p}");
    let q = pi(&KClass::line_bundle(&rint(-10))).unwrap();
    let chord = line_through(&p, &q).unwrap();
    println!("chord through Π(O(−10)): {chord}");

    // Exact endpoints where the chord meets ∂U = {w = b²/2}.  Here both
    // are rational; in general they live in a quadratic extension.
    let (b1, b2) = parabola_roots(&chord).unwrap();
    println!("parabola roots: b₁ = {b1}, b₂ = {b2}");

    // An irrational example: the line w = 1 meets the parabola at ±√2.
    let level = line_through(
        &PlanePoint::new(rint(0), rint(1)),
        &PlanePoint::new(rint(1), rint(1)),
    )
    .unwrap();
    let (b1, b2) = parabola_roots(&level).unwrap();
    println!("\nw = 1 crosses ∂U at b = {b1} and {b2}");
    println!("  50 digits: {}", b2.to_decimal(50));

    // Sidedness is exact, never floating point.
    let probe = PlanePoint::new(rint(-1), rint(50));
    println!(
        "\n{probe} is {:?} the chord {chord}",
        point_side(&chord, &probe).unwrap()
    );
    assert_eq!(point_side(&chord, &probe).unwrap(), Side::Above);

    // Integer b-values on a chord segment control where line-bundle
    // walls can interpose.
    match segment_contains_integer_b(&chord).unwrap() {
        Some(b) => println!("the chord's open segment contains the integer b = {b}"),
        None => println!("the chord's open segment contains no integer b"),
    }

    // Π' sees rank-0 classes, which Π cannot.
    let v = KClass::new(0, rint(1), rat(-1, 2), rat(1, 6));
    println!("\nΠ(v) for rank 0 fails: {}", pi(&v).unwrap_err());
    println!("Π'(v) = {}", pi_prime(&v).unwrap());
}
