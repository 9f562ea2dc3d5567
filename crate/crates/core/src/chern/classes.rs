//! Chern character and Todd class through power sums.
//!
//! For a bundle with Chern roots `x_i`, the power sums `p_k = sum x_i^k`
//! follow from the Chern classes by Newton's identities and `ch_k = p_k / k!`.
//! The Todd class is multiplicative in the roots, so `log td` is a fixed
//! linear combination of the `p_k`.

use super::ring::RingElement;
use crate::Rational;

/// `p_k` for `k = 1..=up_to` from the total Chern class.
pub fn power_sums(total_chern: &RingElement, up_to: u32) -> Vec<RingElement> {
    let c: Vec<RingElement> = (0..=up_to).map(|k| total_chern.part(k)).collect();
    let mut p: Vec<RingElement> = vec![RingElement::zero(total_chern.ring())];
    for k in 1..=up_to as usize {
        let mut pk = c[k].scale(Rational::from_integer(k as i64 * if k % 2 == 1 { 1 } else { -1 }));
        for i in 1..k {
            let term = &c[i] * &p[k - i];
            pk = if i % 2 == 1 { &pk + &term } else { &pk - &term };
        }
        p.push(pk);
    }
    p
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

/// `ch = rank + sum_k p_k / k!`.
pub fn chern_character(total_chern: &RingElement, rank: i64, up_to: u32) -> RingElement {
    let p = power_sums(total_chern, up_to);
    (1..=up_to).fold(RingElement::constant(total_chern.ring(), Rational::from_integer(rank)), |acc, k| {
        &acc + &p[k as usize].scale(Rational::new(1, factorial(k)))
    })
}

/// Chern character of the dual bundle: `ch_k` picks up `(-1)^k`.
pub fn dual(ch: &RingElement) -> RingElement {
    (0..=ch.max_degree()).fold(RingElement::zero(ch.ring()), |acc, k| {
        let part = ch.part(k);
        if k % 2 == 0 { &acc + &part } else { &acc - &part }
    })
}

/// Coefficients of `log(x / (1 - e^{-x}))` in `x^k`, `k = 1..=6`.
const LOG_TODD: [(u32, i64, i64); 4] = [(1, 1, 2), (2, -1, 24), (4, 1, 2880), (6, -1, 181440)];

/// Todd class from the Chern character: `log td = sum_k a_k k! ch_k`.
pub fn todd_from_ch(ch: &RingElement, up_to: u32) -> RingElement {
    let ring = ch.ring();
    let log_td = LOG_TODD.iter().filter(|(k, _, _)| *k <= up_to).fold(RingElement::zero(ring), |acc, (k, n, d)| {
        let pk = ch.part(*k).scale(Rational::from_integer(factorial(*k)));
        &acc + &pk.scale(Rational::new(*n, *d))
    });
    truncate(&log_td.exp(), up_to)
}

pub fn todd_class(total_chern: &RingElement, up_to: u32) -> RingElement {
    todd_from_ch(&chern_character(total_chern, 0, up_to), up_to)
}

/// Drops parts of degree above `up_to`.
pub fn truncate(x: &RingElement, up_to: u32) -> RingElement {
    (0..=up_to).fold(RingElement::zero(x.ring()), |acc, k| &acc + &x.part(k))
}
