//! Standard group constructors, the `name:parameter` builtin registry, and
//! the on-disk generator file format.
//!
//! File format: the first non-comment line is `degree <n>`; every later
//! non-comment line is one generator in 0-based cycle notation without fixed
//! points, e.g. `(0 1 2)(3 4)`. The identity is written `()`. Lines starting
//! with `#` are comments.

use std::path::Path;

use crate::field::Field;
use crate::group::PermutationGroup;
use crate::perm::{Permutation, Point};
use crate::Error;

pub fn cyclic(n: usize) -> Result<PermutationGroup, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclic: degree must be ≥ 1".into()));
    }
    if n == 1 {
        return Ok(PermutationGroup::trivial(1));
    }
    let cycle = Permutation::from_images((0..n).map(|i| ((i + 1) % n) as Point).collect())?;
    PermutationGroup::new(vec![cycle])
}

/// The dihedral group of order 2n acting on n points (n ≥ 3).
pub fn dihedral(n: usize) -> Result<PermutationGroup, Error> {
    if n < 3 {
        return Err(Error::InvalidArgument("dihedral: degree must be ≥ 3".into()));
    }
    let cycle = Permutation::from_images((0..n).map(|i| ((i + 1) % n) as Point).collect())?;
    let flip = Permutation::from_images((0..n).map(|i| ((n - i) % n) as Point).collect())?;
    PermutationGroup::new(vec![cycle, flip])
}

pub fn symmetric(n: usize) -> Result<PermutationGroup, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("symmetric: degree must be ≥ 1".into()));
    }
    if n == 1 {
        return Ok(PermutationGroup::trivial(1));
    }
    let cycle = Permutation::from_images((0..n).map(|i| ((i + 1) % n) as Point).collect())?;
    let swap = Permutation::parse_cycles("(0 1)", n)?;
    PermutationGroup::new(vec![swap, cycle])
}

pub fn alternating(n: usize) -> Result<PermutationGroup, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("alternating: degree must be ≥ 1".into()));
    }
    if n <= 2 {
        return Ok(PermutationGroup::trivial(n));
    }
    let three = Permutation::parse_cycles("(0 1 2)", n)?;
    let long = if n % 2 == 1 {
        Permutation::from_images((0..n).map(|i| ((i + 1) % n) as Point).collect())?
    } else {
        // (1 2 … n-1), an even permutation fixing 0.
        Permutation::from_images(
            std::iter::once(0)
                .chain((1..n).map(|i| (i % (n - 1) + 1) as Point))
                .collect(),
        )?
    };
    PermutationGroup::new(vec![three, long])
}

/// AGL(1,q): all maps x ↦ ax + b on GF(q), degree q, order q(q-1).
pub fn agl1(q: u64) -> Result<PermutationGroup, Error> {
    let f = Field::new(q)?;
    let translate = field_map(&f, |x| f.add(x, 1))?;
    let scale = field_map(&f, |x| f.mul(x, f.primitive_element()))?;
    PermutationGroup::new(vec![translate, scale])
}

/// PSL(2,q) on the projective line: points 0..q-1 are the field elements,
/// point q is ∞. Degree q+1, order q(q²-1)/gcd(2,q-1).
pub fn psl2(q: u64) -> Result<PermutationGroup, Error> {
    let f = Field::new(q)?;
    let mut gens = Vec::new();
    for b in additive_basis(&f) {
        gens.push(mobius(&f, 1, b, 0, 1)?);
        gens.push(mobius(&f, 1, 0, b, 1)?);
    }
    PermutationGroup::new(gens)
}

/// PGL(2,q) on the projective line. Degree q+1, order q(q²-1).
pub fn pgl2(q: u64) -> Result<PermutationGroup, Error> {
    let f = Field::new(q)?;
    let mut gens = psl2(q)?.generators().to_vec();
    gens.push(mobius(&f, f.primitive_element(), 0, 0, 1)?);
    PermutationGroup::new(gens)
}

/// PΓL(2,q): PGL(2,q) extended by the field automorphisms. For prime q this
/// coincides with PGL(2,q).
pub fn pgammal2(q: u64) -> Result<PermutationGroup, Error> {
    let f = Field::new(q)?;
    let mut gens = pgl2(q)?.generators().to_vec();
    if f.characteristic() != f.size() {
        let p = f.characteristic();
        let frobenius = projective_map(&f, |x| f.pow(x, p))?;
        gens.push(frobenius);
    }
    PermutationGroup::new(gens)
}

/// A permutation of GF(q) from a field bijection.
fn field_map(f: &Field, map: impl Fn(u64) -> u64) -> Result<Permutation, Error> {
    Permutation::from_images(f.elements().map(|x| map(x) as Point).collect())
}

/// A permutation of the projective line fixing ∞, from a field bijection.
fn projective_map(f: &Field, map: impl Fn(u64) -> u64) -> Result<Permutation, Error> {
    let infinity = f.size() as Point;
    Permutation::from_images(
        f.elements()
            .map(|x| map(x) as Point)
            .chain(std::iter::once(infinity))
            .collect(),
    )
}

/// The Möbius permutation of the projective line for the matrix
/// [[a, b], [c, d]], acting on row vectors: x ↦ (xa + c) / (xb + d).
fn mobius(f: &Field, a: u64, b: u64, c: u64, d: u64) -> Result<Permutation, Error> {
    let det = f.sub(f.mul(a, d), f.mul(b, c));
    if det == 0 {
        return Err(Error::InvalidArgument("singular Möbius matrix".into()));
    }
    let q = f.size();
    let infinity = q as Point;
    let mut images = Vec::with_capacity(q as usize + 1);
    for x in f.elements() {
        let num = f.add(f.mul(x, a), c);
        let den = f.add(f.mul(x, b), d);
        images.push(if den == 0 {
            infinity
        } else {
            f.mul(num, f.inv(den)) as Point
        });
    }
    // ∞ = [1 : 0] maps to [a : b].
    images.push(if b == 0 { infinity } else { f.mul(a, f.inv(b)) as Point });
    Permutation::from_images(images)
}

/// A basis of GF(q) over its prime field: {1} for prime q, powers of a
/// primitive element for q = 2^p.
fn additive_basis(f: &Field) -> Vec<u64> {
    match *f {
        Field::Prime { .. } => vec![1],
        Field::Binary { p, .. } => {
            let g = f.primitive_element();
            (0..p as u64).map(|i| f.pow(g, i)).collect()
        }
    }
}

/// Parses a builtin registry name such as `cyclic:5`, `agl1:7` or `psl2:11`.
pub fn from_registry(spec: &str) -> Result<PermutationGroup, Error> {
    let (name, param) = spec.split_once(':').ok_or_else(|| {
        Error::InvalidArgument(format!("builtin {spec:?}: expected name:parameter"))
    })?;
    let value: u64 = param
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("builtin {spec:?}: bad parameter")))?;
    match name {
        "cyclic" => cyclic(value as usize),
        "dihedral" => dihedral(value as usize),
        "symmetric" => symmetric(value as usize),
        "alternating" => alternating(value as usize),
        "agl1" => agl1(value),
        "psl2" => psl2(value),
        "pgl2" => pgl2(value),
        "pgammal2" => pgammal2(value),
        _ => Err(Error::InvalidArgument(format!("unknown builtin {name:?}"))),
    }
}

/// Parses the generator file format from a string.
pub fn parse_group_file(text: &str) -> Result<PermutationGroup, Error> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match degree {
            None => {
                let rest = line.strip_prefix("degree").ok_or_else(|| {
                    Error::GroupFile(format!("line {}: expected `degree <n>`", lineno + 1))
                })?;
                let n: usize = rest.trim().parse().map_err(|_| {
                    Error::GroupFile(format!("line {}: bad degree {rest:?}", lineno + 1))
                })?;
                if n == 0 {
                    return Err(Error::GroupFile("degree must be ≥ 1".into()));
                }
                degree = Some(n);
            }
            Some(n) => {
                let g = Permutation::parse_cycles(line, n)
                    .map_err(|e| Error::GroupFile(format!("line {}: {e}", lineno + 1)))?;
                gens.push(g);
            }
        }
    }
    if degree.is_none() {
        return Err(Error::GroupFile("missing `degree <n>` line".into()));
    }
    if gens.is_empty() {
        return Err(Error::GroupFile("no generators".into()));
    }
    PermutationGroup::new(gens)
}

pub fn from_file(path: &Path) -> Result<PermutationGroup, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_group_file(&text)
}

/// Renders a group in the generator file format.
pub fn write_group_file(group: &PermutationGroup, header: &str) -> String {
    let mut out = String::new();
    for line in header.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("degree {}\n", group.degree()));
    for g in group.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}
