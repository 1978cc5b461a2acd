//! Weak stability at a point of `U`: the slope `ν_{b,w}`, heart
//! membership at the numerical level, and the linear-in-`(b,w)` form
//! behind the cubic Bogomolov-Gieseker-type inequality, whose zero line
//! `ℓ_f` bounds semistability from below.
//!
//! Run with `cargo run -p tiltwall --example weak_stability`.

use tiltwall::plane::parabola_roots;
use tiltwall::rat::{rat, rint};
use tiltwall::stability::{bg_form, bg_form_half, bg_line, heart_positivity, li_region, lf_roots, nu};
use tiltwall::threefold::{KClass, ThreefoldModel};

fn main() {
    let x = ThreefoldModel::quintic();
    let v = KClass::new(0, rint(1), rat(-1, 2), rat(1, 6));
    let o = KClass::line_bundle(&rint(0));

    // ν_{b,w} at a couple of points of U.  Rank-0 classes have finite
    // slope everywhere; line bundles become infinite when b = n.
    let (b, w) = (rat(-3, 2), rint(2));
    println!("at (b, w) = ({b}, {w}):");
    println!("  ν(v)    = {}", nu(&b, &w, &v, &x).unwrap());
    println!("  ν(O)    = {}", nu(&b, &w, &o, &x).unwrap());
    println!("  ν(O) at b = 0 is {}", nu(&rint(0), &w, &o, &x).unwrap());
    println!("  heart side of O: {:?}", heart_positivity(&b, &o, &x));

    // The quadratic form of the conjectural inequality is linear in
    // (b, w) on the locus where it matters: it equals exactly twice the
    // reduced linear form, identically in (b, w).
    let shifted = &v - &KClass::line_bundle(&rint(-10));
    let q = bg_form(&b, &w, &shifted, &x);
    let l = bg_form_half(&b, &w, &shifted, &x);
    println!("\nquadratic form at ({b}, {w}): {q} = 2 · {l}");
    assert_eq!(q, rint(2) * l);

    // ℓ_f: the zero line of that linear form.  Below it the class
    // admits no semistable object, which seeds the derivation walk.
    let lf = bg_line(&shifted, &x).unwrap();
    println!("ℓ_f of v − O(−10): {lf}");

    // Its parabola chord endpoints are quadratic irrationals with the
    // documented large-n₀ asymptotics b₁ ≈ −n₀ + c/3, b₂ ≈ n₀/2 + ...
    let (b1, b2) = lf_roots(&shifted, &x).unwrap();
    println!("  roots: b₁ = {}...", &b1.to_decimal(12));
    println!("         b₂ = {}...", &b2.to_decimal(12));
    let (p1, p2) = parabola_roots(&lf).unwrap();
    assert_eq!(b1, p1);
    assert_eq!(b2, p2);

    // The integer-b safety strip: above the parabola over integer b the
    // stronger numerical hypotheses hold outright; between the parabola
    // and the half-integer bumps they fail.
    println!("\nli_region(0, 1/2)  = {}", li_region(&rint(0), &rat(1, 2)));
    println!("li_region(1/2, 1/4) = {}", li_region(&rat(1, 2), &rat(1, 4)));
}
