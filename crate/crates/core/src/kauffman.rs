//! Jones polynomial from the Kauffman bracket state sum.
//!
//! `<D> = Σ_s A^{#A(s) - #B(s)} δ^{loops(s) - 1}` with `δ = -A² - A⁻²`, and
//! `V = (-A³)^{-w} <D>`. The A-smoothing of `X(a,b,c,d)` joins `(a,b)` and
//! `(c,d)`. Exponents of `A` in `V` are even; `A² = -q⁻¹` (equivalently
//! `√t = -q`, `A = t^{-1/4}`) gives the `q`-polynomial whose product with
//! `q + q⁻¹` is the graded Euler characteristic of Khovanov homology.
//!
//! Loops are traced by walking the strands, independently of the cube module.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::pd::LinkDiagram;
use crate::poly::LaurentPolynomial;

type Ends = BTreeMap<u32, Vec<(usize, usize)>>;

fn strand_ends(d: &LinkDiagram) -> Ends {
    let mut ends = Ends::new();
    for (x, c) in d.crossings().iter().enumerate() {
        for (s, &a) in c.incident.iter().enumerate() {
            ends.entry(a).or_default().push((x, s));
        }
    }
    ends
}

fn loop_count(d: &LinkDiagram, ends: &Ends, state: u64) -> usize {
    let crossings = d.crossings();
    let partner = |x: usize, s: usize| -> usize {
        let b_smoothing = state >> x & 1 == 1;
        match (b_smoothing, s) {
            (false, 0) => 1,
            (false, 1) => 0,
            (false, 2) => 3,
            (false, 3) => 2,
            (true, 0) => 3,
            (true, 3) => 0,
            (true, 1) => 2,
            (true, 2) => 1,
            _ => unreachable!(),
        }
    };

    let mut visited: BTreeMap<u32, bool> = ends.keys().map(|&a| (a, false)).collect();
    let mut loops = 0;
    for (&start, at) in ends {
        if visited[&start] {
            continue;
        }
        loops += 1;
        let (mut arc, mut from) = (start, at[0]);
        while !visited[&arc] {
            visited.insert(arc, true);
            let pair = &ends[&arc];
            let (x, s) = if pair[0] == from { pair[1] } else { pair[0] };
            let t = partner(x, s);
            arc = crossings[x].incident[t];
            from = (x, t);
        }
    }
    loops + d.unknots()
}

/// Jones polynomial in `q`, normalized to 1 on the unknot.
pub fn kauffman_jones(d: &LinkDiagram, cap: usize) -> Result<LaurentPolynomial> {
    let n = d.crossing_count();
    if n > cap {
        return Err(Error::Resource(format!("{n} crossings exceed the cube cap of {cap}")));
    }

    // tally[(loops, a - b)] = number of states
    let ends = strand_ends(d);
    let mut tally: BTreeMap<(usize, i64), u64> = BTreeMap::new();
    for state in 0..1u64 << n {
        let b = state.count_ones() as i64;
        let a = n as i64 - b;
        *tally.entry((loop_count(d, &ends, state), a - b)).or_default() += 1;
    }

    let delta = LaurentPolynomial::from_terms([(2, -1), (-2, -1)]);
    let mut bracket = LaurentPolynomial::zero();
    for ((loops, e), count) in tally {
        let term = &LaurentPolynomial::monomial(count, e) * &delta.pow(loops as u32 - 1);
        bracket = &bracket + &term;
    }

    let w = d.writhe();
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    let v_a = &bracket * &LaurentPolynomial::monomial(sign, -3 * w);

    let mut v = LaurentPolynomial::zero();
    for (e, c) in v_a.terms() {
        assert!(e % 2 == 0, "odd power of A in a normalized bracket");
        let k = e / 2;
        let c: BigInt = if k.rem_euclid(2) == 0 { c.clone() } else { -c };
        v.add_term(-k, c);
    }
    Ok(v)
}
