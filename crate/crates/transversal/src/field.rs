//! Arithmetic in GF(q) for q prime or q = 2^p, plus the multiplicative
//! generation test used to screen one-dimensional affine groups.
//!
//! Binary fields use a fixed irreducible polynomial per exponent (the
//! low-weight primitive polynomials tabulated in Lidl–Niederreiter), so
//! element encodings are stable across runs:
//!
//! | p | polynomial          |
//! |---|---------------------|
//! | 2 | x^2 + x + 1         |
//! | 3 | x^3 + x + 1         |
//! | 4 | x^4 + x + 1         |
//! | 5 | x^5 + x^2 + 1       |
//! | 6 | x^6 + x + 1         |
//! | 7 | x^7 + x + 1         |
//! | 8 | x^8 + x^4 + x^3 + x^2 + 1 |

use crate::Error;

/// Reduction polynomials for GF(2^p) as bit vectors, one per exponent.
const BINARY_MODULI: [(u32, u64); 7] = [
    (2, 0b111),
    (3, 0b1011),
    (4, 0b1_0011),
    (5, 0b10_0101),
    (6, 0b100_0011),
    (7, 0b1000_0011),
    (8, 0b1_0001_1101),
];

/// A finite field of size q, for q prime or q = 2^p with 2 ≤ p ≤ 8.
/// Elements are `u64` values in `[0, q)`: residues for prime q, polynomial
/// bit vectors for binary q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Prime { q: u64 },
    Binary { p: u32, modulus: u64 },
}

impl Field {
    pub fn new(q: u64) -> Result<Field, Error> {
        if q >= 2 && is_prime(q) {
            return Ok(Field::Prime { q });
        }
        if q.is_power_of_two() {
            let p = q.trailing_zeros();
            if let Some(&(_, modulus)) = BINARY_MODULI.iter().find(|&&(e, _)| e == p) {
                return Ok(Field::Binary { p, modulus });
            }
        }
        Err(Error::UnsupportedFieldSize(q))
    }

    pub fn size(&self) -> u64 {
        match *self {
            Field::Prime { q } => q,
            Field::Binary { p, .. } => 1 << p,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Prime { q } => q,
            Field::Binary { .. } => 2,
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        match *self {
            Field::Prime { q } => (a + b) % q,
            Field::Binary { .. } => a ^ b,
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        match *self {
            Field::Prime { q } => (q - a) % q,
            Field::Binary { .. } => a,
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match *self {
            Field::Prime { q } => a * b % q,
            Field::Binary { p, modulus } => {
                let mut acc = 0u64;
                let mut a = a;
                let mut b = b;
                while b != 0 {
                    if b & 1 != 0 {
                        acc ^= a;
                    }
                    b >>= 1;
                    a <<= 1;
                    if a >> p & 1 != 0 {
                        a ^= modulus;
                    }
                }
                acc
            }
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "zero has no inverse");
        // q stays small in every use, so a^(q-2) is plenty fast.
        self.pow(a, self.size() - 2)
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.size()
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u64 {
        let n = self.size() - 1;
        'next: for g in 1..self.size() {
            let mut x = 1;
            for _ in 0..n - 1 {
                x = self.mul(x, g);
                if x == 1 {
                    continue 'next;
                }
            }
            return g;
        }
        unreachable!("every finite field has a primitive element");
    }

    /// Order of the subgroup of the multiplicative group generated by the
    /// given non-zero elements.
    pub fn multiplicative_subgroup_order(&self, gens: &[u64]) -> u64 {
        let mut seen = vec![false; self.size() as usize];
        seen[1] = true;
        let mut stack = vec![1u64];
        let mut count = 1u64;
        while let Some(x) = stack.pop() {
            for &g in gens {
                debug_assert!(g != 0);
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }
}

/// Outcome of the generation test: does every `c ∉ {0,1}` give
/// `⟨-1, c, c-1⟩` = the full multiplicative group?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldConditionReport {
    pub q: u64,
    pub holds: bool,
    /// The values of `c` for which the subgroup is proper.
    pub failing: Vec<u64>,
}

/// Tests whether, for every `c ∈ GF(q) \ {0,1}`, the elements `-1`, `c` and
/// `c-1` generate the whole multiplicative group of GF(q).
pub fn field_condition(q: u64) -> Result<FieldConditionReport, Error> {
    let f = Field::new(q)?;
    let full = q - 1;
    let minus_one = f.neg(1);
    let mut failing = Vec::new();
    for c in f.elements() {
        if c == 0 || c == 1 {
            continue;
        }
        let c_minus_1 = f.sub(c, 1);
        debug_assert!(c_minus_1 != 0);
        let gens: Vec<u64> = if minus_one == 1 {
            vec![c, c_minus_1]
        } else {
            vec![minus_one, c, c_minus_1]
        };
        if f.multiplicative_subgroup_order(&gens) != full {
            failing.push(c);
        }
    }
    Ok(FieldConditionReport {
        q,
        holds: failing.is_empty(),
        failing,
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_prime_powers() {
        assert!(Field::new(6).is_err());
        assert!(Field::new(1).is_err());
        // 9 = 3^2 is a prime power but neither prime nor 2^p: out of scope.
        assert!(Field::new(9).is_err());
        assert!(Field::new(8).is_ok());
        assert!(Field::new(23).is_ok());
    }

    #[test]
    fn inverses_in_every_supported_field() {
        for q in [2u64, 3, 5, 7, 11, 13, 23, 31, 4, 8, 16, 32, 64] {
            let f = Field::new(q).unwrap();
            for a in 1..f.size() {
                assert_eq!(f.mul(a, f.inv(a)), 1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn distributivity_spot_checks() {
        for q in [7u64, 8, 16, 23] {
            let f = Field::new(q).unwrap();
            for a in 0..f.size() {
                for b in 0..f.size() {
                    let c = (a * 3 + b + 1) % f.size();
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c)),
                        "q={q} a={a} b={b} c={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive_in_characteristic_two() {
        for q in [4u64, 8, 16, 32] {
            let f = Field::new(q).unwrap();
            for a in 0..f.size() {
                for b in 0..f.size() {
                    let lhs = f.mul(f.add(a, b), f.add(a, b));
                    let rhs = f.add(f.mul(a, a), f.mul(b, b));
                    assert_eq!(lhs, rhs, "q={q}");
                }
            }
        }
    }

    #[test]
    fn reduction_polynomials_are_irreducible() {
        // Brute-force trial division over GF(2)[x]: an irreducible degree-p
        // polynomial has no factor of degree in 1..=p/2.
        for &(p, modulus) in &BINARY_MODULI {
            for d in 1..=p / 2 {
                for candidate in (1u64 << d)..(1u64 << (d + 1)) {
                    assert!(
                        !poly_divides(candidate, modulus),
                        "GF(2^{p}) modulus {modulus:#b} divisible by {candidate:#b}"
                    );
                }
            }
        }
    }

    fn poly_divides(d: u64, mut n: u64) -> bool {
        let dd = 63 - d.leading_zeros() as i32;
        loop {
            if n == 0 {
                return true;
            }
            let nd = 63 - n.leading_zeros() as i32;
            if nd < dd {
                return false;
            }
            n ^= d << (nd - dd);
        }
    }

    #[test]
    fn primitive_elements_have_full_order() {
        for q in [7u64, 8, 11, 16, 23, 32] {
            let f = Field::new(q).unwrap();
            let g = f.primitive_element();
            assert_eq!(f.multiplicative_subgroup_order(&[g]), q - 1, "q={q}");
        }
    }

    #[test]
    fn generation_condition_small_fields() {
        for q in [7u64, 11] {
            let report = field_condition(q).unwrap();
            assert!(report.holds, "q={q} failing {:?}", report.failing);
        }
        // q = 8 and q = 32 have prime multiplicative order (7 and 31), so any
        // c ≠ 1 generates everything on its own.
        for q in [8u64, 32] {
            let report = field_condition(q).unwrap();
            assert!(report.holds, "q={q}");
        }
    }

    #[test]
    fn generation_condition_finds_failures() {
        // q = 13: the squares mod 13 are {1,3,4,9,10,12}, a proper subgroup
        // containing -1 = 12. For c = 4, both c and c-1 = 3 are squares, so
        // ⟨-1, c, c-1⟩ stays inside it.
        let report = field_condition(13).unwrap();
        assert!(!report.holds);
        assert!(report.failing.contains(&4));
    }
}
