//! Product colourings and the Ramsey lower-bound pipeline.
//!
//! For colourings A of `K_m` and B of `K_n`, a product colouring of the
//! complete graph on the m*n pairs agrees with A on edges whose second
//! coordinates match, with B (palette shifted past A's) on edges whose
//! first coordinates match, and with either on the rest. The star product
//! gives every mixed edge its B colour; it is the member obtained by
//! substituting a copy of A for each vertex of B, and the only member
//! used by the witness pipeline because substitution preserves
//! C_r-freeness when B's odd girth exceeds r.

use std::fmt::Write as _;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::builder::{build_to_girth, BuildError};
use crate::colouring::{Colour, Colouring, ColouringError, Vertex, MAX_VERTICES};
use crate::girth::{is_cr_free, Budget, CrCheck, GirthError};
use crate::schedule::{self, ScheduleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("{what} needs {n} vertices, beyond the cap of {max}")]
    SizeCap {
        what: &'static str,
        n: u128,
        max: usize,
    },
    #[error("cycle length r must be odd and at least 3 (got {r})")]
    BadCycleLength { r: usize },
    #[error(
        "witness pipeline for cycle length {r} needs at least {min} colours (got {k})"
    )]
    TooFewColours { r: usize, k: u32, min: u32 },
    #[error("colour count must be below 2^31 (got {k})")]
    TooManyColours { k: usize },
    #[error(
        "colouring does not have product dimensions: expected {expected_n} vertices \
         and {expected_k} colours, found {n} and {k}"
    )]
    DimensionMismatch {
        expected_n: usize,
        expected_k: usize,
        n: usize,
        k: usize,
    },
    #[error("vertex count overflow in witness arithmetic")]
    Overflow,
    #[error(
        "witness verification found a monochromatic cycle in colour {colour}, \
         contradicting the structural guarantee; this is a bug"
    )]
    StructuralContradiction { colour: Colour },
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Girth(#[from] GirthError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// Bijection between pairs `(g, h)` and product vertex ids `g + left*h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductPairing {
    pub left: usize,
    pub right: usize,
}

impl ProductPairing {
    pub fn new(left: usize, right: usize) -> Self {
        ProductPairing { left, right }
    }

    pub fn size(&self) -> usize {
        self.left * self.right
    }

    #[inline]
    pub fn combine(&self, g: usize, h: usize) -> Vertex {
        debug_assert!(g < self.left && h < self.right);
        (g + self.left * h) as Vertex
    }

    #[inline]
    pub fn split(&self, v: Vertex) -> (usize, usize) {
        let v = v as usize;
        (v % self.left, v / self.left)
    }
}

/// The k-colouring of `K_{2^k}` from binary vertex labels: edge `{x, y}`
/// takes 1 plus the index of the lowest bit where x and y differ. Every
/// colour class is bipartite, split by its bit.
pub fn bipartite_colouring(k: u32) -> Result<Colouring, ProductError> {
    if k == 0 {
        return Err(ColouringError::NoColours.into());
    }
    let n = if k >= 127 { u128::MAX } else { 1u128 << k };
    if n > MAX_VERTICES as u128 {
        return Err(ProductError::SizeCap {
            what: "bipartite colouring",
            n,
            max: MAX_VERTICES,
        });
    }
    Ok(Colouring::from_fn(n as usize, k as usize, |x, y| {
        (x ^ y).trailing_zeros() + 1
    })?)
}

/// The doubling construction: for k = 1 a single colour on `K_{r-1}`; for
/// k > 1 two disjoint copies of the (k-1)-colouring with all cross edges
/// in colour k. The result on `(r-1) * 2^(k-1)` vertices has no
/// monochromatic cycle of length r.
pub fn erdos_graham_colouring(r: usize, k: u32) -> Result<Colouring, ProductError> {
    if r < 3 || r.is_multiple_of(2) {
        return Err(ProductError::BadCycleLength { r });
    }
    if k == 0 {
        return Err(ProductError::TooFewColours { r, k: 0, min: 1 });
    }
    let n = (r as u128 - 1)
        .checked_shl(k - 1)
        .ok_or(ProductError::Overflow)?;
    if n > MAX_VERTICES as u128 {
        return Err(ProductError::SizeCap {
            what: "doubling construction",
            n,
            max: MAX_VERTICES,
        });
    }
    let n = n as usize;
    Ok(Colouring::from_fn(n, k as usize, |x, y| {
        let (mut x, mut y) = (x as usize, y as usize);
        let mut level = k;
        let mut size = n;
        loop {
            if level == 1 {
                return 1;
            }
            let half = size / 2;
            match (x >= half, y >= half) {
                (false, false) => {}
                (true, true) => {
                    x -= half;
                    y -= half;
                }
                _ => return level, // cross edge between the two copies
            }
            size = half;
            level -= 1;
        }
    })?)
}

/// The star product: same-second-coordinate edges from `a`, every other
/// edge from `b` with colours shifted past `a`'s palette. `b`'s colour i
/// appears as `i + a.k()`.
pub fn product_star(a: &Colouring, b: &Colouring) -> Result<Colouring, ProductError> {
    let pairing = ProductPairing::new(a.n(), b.n());
    let total = (a.n() as u128) * (b.n() as u128);
    if total > MAX_VERTICES as u128 {
        return Err(ProductError::SizeCap {
            what: "product colouring",
            n: total,
            max: MAX_VERTICES,
        });
    }
    let offset = colour_offset(a)?;
    Ok(Colouring::from_fn(
        pairing.size(),
        a.k() + b.k(),
        |u, v| {
            let (g1, h1) = pairing.split(u);
            let (g2, h2) = pairing.split(v);
            if h1 == h2 {
                a.raw(g1 as Vertex, g2 as Vertex)
            } else {
                b.raw(h1 as Vertex, h2 as Vertex) + offset
            }
        },
    )?)
}

/// True iff `c` is one of the product colourings of `a` and `b`: matching
/// second coordinates take `a`'s colour, matching first coordinates take
/// `b`'s shifted colour, and mixed edges take one of the two.
pub fn is_product_member(
    c: &Colouring,
    a: &Colouring,
    b: &Colouring,
) -> Result<bool, ProductError> {
    let pairing = ProductPairing::new(a.n(), b.n());
    if c.n() != pairing.size() || c.k() != a.k() + b.k() {
        return Err(ProductError::DimensionMismatch {
            expected_n: pairing.size(),
            expected_k: a.k() + b.k(),
            n: c.n(),
            k: c.k(),
        });
    }
    let offset = colour_offset(a)?;
    for u in 0..c.n() as Vertex {
        for v in (u + 1)..c.n() as Vertex {
            let (g1, h1) = pairing.split(u);
            let (g2, h2) = pairing.split(v);
            let got = c.raw(u, v);
            let ok = if h1 == h2 {
                got == a.raw(g1 as Vertex, g2 as Vertex)
            } else if g1 == g2 {
                got == b.raw(h1 as Vertex, h2 as Vertex) + offset
            } else {
                got == a.raw(g1 as Vertex, g2 as Vertex)
                    || got == b.raw(h1 as Vertex, h2 as Vertex) + offset
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A product member with every mixed edge's side chosen by a seeded coin.
/// Deterministic in the seed.
pub fn random_product_member(
    a: &Colouring,
    b: &Colouring,
    seed: u64,
) -> Result<Colouring, ProductError> {
    let pairing = ProductPairing::new(a.n(), b.n());
    let total = (a.n() as u128) * (b.n() as u128);
    if total > MAX_VERTICES as u128 {
        return Err(ProductError::SizeCap {
            what: "product colouring",
            n: total,
            max: MAX_VERTICES,
        });
    }
    let offset = colour_offset(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Colouring::from_fn(
        pairing.size(),
        a.k() + b.k(),
        |u, v| {
            let (g1, h1) = pairing.split(u);
            let (g2, h2) = pairing.split(v);
            if h1 == h2 {
                a.raw(g1 as Vertex, g2 as Vertex)
            } else if g1 == g2 {
                b.raw(h1 as Vertex, h2 as Vertex) + offset
            } else if rng.next_u32() & 1 == 0 {
                a.raw(g1 as Vertex, g2 as Vertex)
            } else {
                b.raw(h1 as Vertex, h2 as Vertex) + offset
            }
        },
    )?)
}

fn colour_offset(a: &Colouring) -> Result<Colour, ProductError> {
    u32::try_from(a.k()).map_err(|_| ProductError::TooManyColours { k: a.k() })
}

/// The doubling lower bound `(r-1) * 2^(k-1) + 1` on the k-colour Ramsey
/// number of C_r; the baseline every witness is measured against.
pub fn doubling_baseline(r: usize, k: u32) -> Result<u128, ProductError> {
    if r < 3 || r.is_multiple_of(2) {
        return Err(ProductError::BadCycleLength { r });
    }
    if k == 0 {
        return Err(ProductError::TooFewColours { r, k: 0, min: 1 });
    }
    (r as u128 - 1)
        .checked_shl(k - 1)
        .and_then(|v| v.checked_add(1))
        .ok_or(ProductError::Overflow)
}

/// How far the witness construction was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessVerification {
    /// Arithmetic only; the colouring was not materialised.
    ReportOnly,
    /// Materialised; C_r-freeness holds by the substitution argument.
    Structural,
    /// Materialised and exhaustively searched for monochromatic C_r.
    Exhaustive,
}

impl WitnessVerification {
    fn describe(&self, r: usize) -> String {
        match self {
            WitnessVerification::ReportOnly => "report only, not materialised".to_string(),
            WitnessVerification::Structural => {
                format!("structural: C_{r}-freeness by the substitution argument")
            }
            WitnessVerification::Exhaustive => {
                format!("exhaustive: no monochromatic C_{r} in any colour")
            }
        }
    }
}

/// Everything the witness pipeline reports about one `(r, k)` instance.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    /// Odd cycle length avoided.
    pub r: usize,
    /// Colour count of the witness.
    pub k: u32,
    /// Colour count of the high-girth ingredient; an upper bound on the
    /// least possible.
    pub f: u32,
    /// Number of substitution steps: `k - 1 = m*f + c`.
    pub m: u32,
    /// Remainder `c` with `0 <= c < f`.
    pub c: u32,
    /// Witness vertex count `(r-1) * 2^c * (2^f + 1)^m`.
    pub n: u128,
    /// The doubling baseline `(r-1) * 2^(k-1) + 1`.
    pub baseline: u128,
    /// `(n / (r-1))^(1/(k-1)) - 2`: the growth-rate margin implied by n.
    pub epsilon_bound: f64,
    /// Palette offset at which each substitution step placed the
    /// ingredient colours.
    pub colour_offsets: Vec<u32>,
    pub verification: WitnessVerification,
}

impl WitnessReport {
    pub fn exceeds_baseline(&self) -> bool {
        self.n > self.baseline
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "witness report for C_{} with {} colours", self.r, self.k);
        let _ = writeln!(
            out,
            "  ingredient colours f  {} (upper bound on the least possible)",
            self.f
        );
        let _ = writeln!(
            out,
            "  decomposition         k-1 = {}*{} + {}",
            self.m, self.f, self.c
        );
        let _ = writeln!(out, "  vertices n            {}", self.n);
        let _ = writeln!(
            out,
            "  doubling baseline     {} ((r-1)*2^(k-1)+1)",
            self.baseline
        );
        let _ = writeln!(
            out,
            "  margin                n {} baseline",
            if self.n > self.baseline {
                ">"
            } else if self.n == self.baseline {
                "="
            } else {
                "<"
            }
        );
        let _ = writeln!(out, "  epsilon bound         {:.6}", self.epsilon_bound);
        let _ = writeln!(
            out,
            "  ingredient palettes   start at offsets {:?}",
            self.colour_offsets
        );
        let _ = writeln!(
            out,
            "  verification          {}",
            self.verification.describe(self.r)
        );
        out
    }
}

/// A witness report plus the colouring itself when materialised.
#[derive(Clone, Debug)]
pub struct RamseyWitness {
    pub report: WitnessReport,
    pub colouring: Option<Colouring>,
}

/// Options for [`ramsey_witness`].
#[derive(Clone, Copy, Debug)]
pub struct WitnessOptions {
    /// Build the colouring (within the size cap) rather than only the report.
    pub materialise: bool,
    /// After materialising, exhaustively search every colour for C_r.
    pub exhaustive: bool,
    pub budget: Budget,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            materialise: false,
            exhaustive: false,
            budget: Budget::unlimited(),
        }
    }
}

/// The least colour count (along this pipeline) whose build has odd girth
/// strictly above `r`; the ingredient palette size for cycle length `r`.
pub fn ingredient_colours(r: usize) -> Result<u32, ProductError> {
    if r < 3 || r.is_multiple_of(2) {
        return Err(ProductError::BadCycleLength { r });
    }
    Ok(schedule::colours_to_exceed(r as u64)? as u32)
}

/// Builds the C_r lower-bound witness with k colours.
///
/// The pipeline: take the f-colouring A of `K_{2^f+1}` with odd girth
/// above r, write `k - 1 = m*f + c` with `0 <= c < f`, start from the
/// doubling construction with `c + 1` colours on `(r-1) * 2^c` vertices,
/// and substitute A in m times. The result is a k-colouring of
/// `K_{(r-1) * 2^c * (2^f+1)^m}` with no monochromatic C_r.
///
/// Reports are always produced; the colouring itself only when
/// `materialise` is set and the final size fits the cap. A materialise
/// request beyond the cap yields a report-only result, visible in the
/// report's verification field.
pub fn ramsey_witness(
    r: usize,
    k: u32,
    opts: &WitnessOptions,
) -> Result<RamseyWitness, ProductError> {
    if r < 3 || r.is_multiple_of(2) {
        return Err(ProductError::BadCycleLength { r });
    }
    let f = ingredient_colours(r)?;
    if k < f + 1 {
        return Err(ProductError::TooFewColours { r, k, min: f + 1 });
    }
    let m = (k - 1) / f;
    let c = (k - 1) % f;

    if f >= 127 {
        // 2^f + 1 vertices per ingredient copy no longer fit the report
        return Err(ProductError::Overflow);
    }
    let ingredient_n = (1u128 << f) + 1;
    let n = ingredient_n
        .checked_pow(m)
        .and_then(|v| v.checked_mul((r as u128 - 1) << c))
        .ok_or(ProductError::Overflow)?;
    let baseline = doubling_baseline(r, k)?;
    let epsilon_bound = (n as f64 / (r as f64 - 1.0)).powf(1.0 / (k as f64 - 1.0)) - 2.0;
    let colour_offsets: Vec<u32> = (0..m).map(|i| c + 1 + i * f).collect();

    let mut verification = WitnessVerification::ReportOnly;
    let mut colouring = None;
    if opts.materialise && n <= MAX_VERTICES as u128 {
        let ingredient = build_to_girth(r + 2)?;
        debug_assert_eq!(ingredient.k() as u32, f);
        let mut witness = erdos_graham_colouring(r, c + 1)?;
        for _ in 0..m {
            witness = product_star(&witness, ingredient.colouring())?;
        }
        debug_assert_eq!(witness.n() as u128, n);
        debug_assert_eq!(witness.k() as u32, k);
        verification = WitnessVerification::Structural;
        if opts.exhaustive {
            match is_cr_free(&witness, r, &opts.budget)? {
                CrCheck::Free => verification = WitnessVerification::Exhaustive,
                CrCheck::Witness { colour, .. } => {
                    return Err(ProductError::StructuralContradiction { colour });
                }
            }
        }
        colouring = Some(witness);
    }

    Ok(RamseyWitness {
        report: WitnessReport {
            r,
            k,
            f,
            m,
            c,
            n,
            baseline,
            epsilon_bound,
            colour_offsets,
            verification,
        },
        colouring,
    })
}
