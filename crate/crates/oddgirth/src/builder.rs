//! The rooted-round-colouring constructions: the base 2-colouring of K5
//! and the doubling step that grows a certified colouring of `K_n` into
//! one of `K_{2n-1}` with an extra colour.
//!
//! Every constructor re-verifies its own certificate before returning.
//! The partition bookkeeping of the doubling step is easy to get wrong,
//! and a verification failure here means an implementation bug, so it is
//! a hard error rather than a silent assumption.

use thiserror::Error;

use crate::certify::{verify_rrc, CertifyError, RoundPartition, RrcCertificate};
use crate::colouring::{Colour, Colouring, ColouringError, Vertex, MAX_VERTICES};
use crate::schedule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("doubling requires the root to be vertex 0 (got {root})")]
    RootNotZero { root: Vertex },
    #[error(
        "{steps} steps need {n} vertices, beyond the cap of {max}; \
         the signature would be {signature}"
    )]
    SizeCap {
        steps: u64,
        n: u128,
        max: usize,
        signature: schedule::Signature,
    },
    #[error("target girth must be odd and at least 5 (got {target})")]
    BadTarget { target: usize },
    #[error("constructed certificate rejected:\n{report}")]
    CertificateRejected { report: String },
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Schedule(#[from] schedule::ScheduleError),
}

/// A colouring together with a verified rooted round certificate.
#[derive(Clone, Debug)]
pub struct RrcColouring {
    colouring: Colouring,
    certificate: RrcCertificate,
}

impl RrcColouring {
    /// Pairs a colouring with its certificate, verifying the certificate.
    pub fn new(colouring: Colouring, certificate: RrcCertificate) -> Result<Self, BuildError> {
        let report = verify_rrc(&colouring, &certificate)?;
        if !report.passed() {
            return Err(BuildError::CertificateRejected {
                report: report.render(),
            });
        }
        Ok(RrcColouring {
            colouring,
            certificate,
        })
    }

    pub fn colouring(&self) -> &Colouring {
        &self.colouring
    }

    pub fn certificate(&self) -> &RrcCertificate {
        &self.certificate
    }

    pub fn n(&self) -> usize {
        self.colouring.n()
    }

    pub fn k(&self) -> usize {
        self.colouring.k()
    }

    pub fn root(&self) -> Vertex {
        self.certificate.root()
    }

    /// Per-colour round parameters `(r_1, ..., r_k)` in colour order.
    pub fn signature(&self) -> Vec<usize> {
        self.certificate.signature()
    }
}

/// The base: K5 with colour 1 on the cycle 0-1-2-3-4-0 and colour 2 on the
/// complementary cycle 0-2-4-1-3-0, rooted at 0. Both classes are 5-cycles,
/// so the signature is (5, 5).
pub fn base_k5() -> RrcColouring {
    let colouring = Colouring::from_fn(5, 2, |x, y| {
        let d = y - x;
        if d == 1 || d == 4 {
            1
        } else {
            2
        }
    })
    .expect("static construction");
    let single = |order: [Vertex; 5]| order.iter().map(|&v| vec![v]).collect::<Vec<_>>();
    let certificate = RrcCertificate::new(
        0,
        vec![
            RoundPartition::new(5, single([0, 1, 2, 3, 4])).expect("static partition"),
            RoundPartition::new(5, single([0, 2, 4, 1, 3])).expect("static partition"),
        ],
    )
    .expect("static certificate");
    RrcColouring::new(colouring, certificate).expect("the base certificate verifies")
}

/// One doubling step: from a certified colouring of `K_n` with signature
/// `(r_1, ..., r_k)` to one of `K_{2n-1}` with signature
/// `(r_1 + 2, r_2, ..., r_k, 2*r_1 - 1)`.
///
/// Vertex ids are fixed so builds are byte-reproducible: the root keeps
/// id 0, an original vertex `x` keeps its id, and its twin gets
/// `x + (n - 1)`.
///
/// The twin colouring gives `{x, x'}` the new colour `k + 1` and copies
/// the original colour onto the other three twin pairs of every edge.
/// Colour-1 edges along one sweep of the colour-1 partition (root to
/// `X_2`, each `Y_l` to `X_{l+1}`, and `Y_{r_1}` back to the root) are
/// then recoloured `k + 1`, which lengthens colour 1's round structure by
/// two and makes the new colour `(2*r_1 - 1)`-round.
pub fn doubling_step(input: &RrcColouring) -> Result<RrcColouring, BuildError> {
    let root = input.root();
    if root != 0 {
        return Err(BuildError::RootNotZero { root });
    }
    let a = input.colouring();
    let n = a.n();
    let k = a.k();
    let new_n = 2 * n - 1;
    if new_n > MAX_VERTICES {
        let runs = schedule::Signature::from_entries(
            &input
                .signature()
                .iter()
                .map(|&r| r as u64)
                .collect::<Vec<_>>(),
        )?;
        return Err(BuildError::SizeCap {
            steps: 1,
            n: new_n as u128,
            max: MAX_VERTICES,
            signature: runs,
        });
    }
    let new_k = (k + 1) as Colour;
    let shift = (n - 1) as Vertex;
    let first = &input.certificate().partitions()[0];
    let r1 = first.rounds();

    // original vertex behind an id of the doubled graph (root stays 0)
    let orig = |v: Vertex| if v as usize >= n { v - shift } else { v };
    let is_twin = |v: Vertex| v as usize >= n;

    let colouring = Colouring::from_fn(new_n, k + 1, |u, v| {
        let (xu, xv) = (orig(u), orig(v));
        if u == 0 || v == 0 {
            let x = if u == 0 { xv } else { xu };
            let base = a.raw(0, x);
            if base == 1 {
                // recolour root edges into X_2 and into the twin of X_{r_1}
                let other = if u == 0 { v } else { u };
                let part = first.part_of(x);
                let to_x2 = !is_twin(other) && part == 1;
                let to_y_last = is_twin(other) && part == r1 - 1;
                if to_x2 || to_y_last {
                    return new_k;
                }
            }
            return base;
        }
        if xu == xv {
            return new_k; // twin pair {x, x'}
        }
        let base = a.raw(xu, xv);
        if base == 1 && is_twin(u) != is_twin(v) {
            // recolour Y_l to X_{l+1} edges for l = 2 .. r_1 - 1
            let (tw, or) = if is_twin(u) { (xu, xv) } else { (xv, xu) };
            let (pt, po) = (first.part_of(tw), first.part_of(or));
            if (1..=r1 - 2).contains(&pt) && po == pt + 1 {
                return new_k;
            }
        }
        base
    })?;

    let twin_of = |part: &[Vertex]| part.iter().map(|&x| x + shift).collect::<Vec<Vertex>>();
    let merged = |a: &[Vertex], b: Vec<Vertex>| {
        let mut out = a.to_vec();
        out.extend(b);
        out
    };
    let x = first.parts();

    // colour 1 becomes (r_1 + 2)-round
    let mut p1: Vec<Vec<Vertex>> = Vec::with_capacity(r1 + 2);
    p1.push(vec![0]);
    p1.push(twin_of(&x[1]));
    p1.push(twin_of(&x[2]));
    for l in 4..=r1 {
        p1.push(merged(&x[l - 3], twin_of(&x[l - 1])));
    }
    p1.push(x[r1 - 2].clone());
    p1.push(x[r1 - 1].clone());

    let mut partitions = Vec::with_capacity(k + 1);
    partitions.push(RoundPartition::new(new_n, p1)?);

    // colours 2..k keep their round parameter, each part absorbing its twins
    for p in &input.certificate().partitions()[1..] {
        let mut parts: Vec<Vec<Vertex>> = Vec::with_capacity(p.rounds());
        parts.push(vec![0]);
        for part in &p.parts()[1..] {
            parts.push(merged(part, twin_of(part)));
        }
        partitions.push(RoundPartition::new(new_n, parts)?);
    }

    // the new colour is (2*r_1 - 1)-round: originals and twins interleaved
    let mut plast: Vec<Vec<Vertex>> = Vec::with_capacity(2 * r1 - 1);
    plast.push(vec![0]);
    for part in &x[1..] {
        plast.push(part.clone());
        plast.push(twin_of(part));
    }
    partitions.push(RoundPartition::new(new_n, plast)?);

    let certificate = RrcCertificate::new(0, partitions)?;
    RrcColouring::new(colouring, certificate)
}

/// Renames colours so a minimal round parameter sits first. The lowest
/// colour id among the minima becomes colour 1; the others keep their
/// relative order. The certificate is permuted consistently.
pub fn min_first_relabel(input: &RrcColouring) -> Result<RrcColouring, BuildError> {
    let signature = input.signature();
    let min_idx = signature
        .iter()
        .enumerate()
        .min_by_key(|&(_, r)| r)
        .map(|(i, _)| i)
        .expect("certificates are nonempty");
    if min_idx == 0 {
        return Ok(input.clone());
    }
    let k = signature.len();
    // old colour c moves to the front if it is the chosen minimum, else
    // shifts up by one until the gap closes
    let perm: Vec<Colour> = (1..=k as Colour)
        .map(|c| {
            if c == (min_idx + 1) as Colour {
                1
            } else if c < (min_idx + 1) as Colour {
                c + 1
            } else {
                c
            }
        })
        .collect();
    let colouring = input.colouring().relabel_colours(&perm)?;
    let old_parts = input.certificate().partitions();
    let mut new_parts: Vec<RoundPartition> = Vec::with_capacity(k);
    new_parts.push(old_parts[min_idx].clone());
    for (i, p) in old_parts.iter().enumerate() {
        if i != min_idx {
            new_parts.push(p.clone());
        }
    }
    let certificate = RrcCertificate::new(input.root(), new_parts)?;
    RrcColouring::new(colouring, certificate)
}

/// Vertex count after `steps` doubling steps from the base.
fn vertices_after(steps: u64) -> u128 {
    // 2^(steps + 2) + 1, saturating far beyond any cap
    if steps + 2 >= 126 {
        u128::MAX
    } else {
        (1u128 << (steps + 2)) + 1
    }
}

/// Iterates the doubling step from the base, relabelling min-first before
/// each step: after j steps, a (j + 2)-colouring of `K_{2^(j+2)+1}`.
pub fn build_iterated(steps: u32) -> Result<RrcColouring, BuildError> {
    let n = vertices_after(steps as u64);
    if n > MAX_VERTICES as u128 {
        return Err(BuildError::SizeCap {
            steps: steps as u64,
            n,
            max: MAX_VERTICES,
            signature: schedule::signature_at(steps as u64 + 2)?,
        });
    }
    let mut current = base_k5();
    for _ in 0..steps {
        current = doubling_step(&min_first_relabel(&current)?)?;
    }
    Ok(current)
}

/// The ordered signature after `steps` iterated doubling steps, without
/// building anything. Matches [`build_iterated`] exactly, including the
/// colour order.
pub fn iterated_signature(steps: u32) -> Vec<u64> {
    let mut sig: Vec<u64> = vec![5, 5];
    for _ in 0..steps {
        // move the lowest-index minimum to the front, then apply the step
        let min_idx = sig
            .iter()
            .enumerate()
            .min_by_key(|&(_, r)| r)
            .map(|(i, _)| i)
            .expect("nonempty");
        let min = sig.remove(min_idx);
        sig.insert(0, min);
        sig = schedule::signature_step(&sig).expect("entries stay odd and above 3");
    }
    sig
}

/// Steps needed before the minimum round parameter reaches `target`.
pub fn steps_to_girth(target: usize) -> Result<u32, BuildError> {
    if target < 5 || target.is_multiple_of(2) {
        return Err(BuildError::BadTarget { target });
    }
    let colours = schedule::colours_to_exceed(target as u64 - 1)?;
    Ok((colours - 2) as u32)
}

/// Iterates until every colour's round parameter is at least `target` and
/// returns the first such build. Beyond the size cap the error carries
/// the signature the build would have reached.
pub fn build_to_girth(target: usize) -> Result<RrcColouring, BuildError> {
    let steps = steps_to_girth(target)?;
    match build_iterated(steps) {
        Err(BuildError::SizeCap { n, max, signature, .. }) => Err(BuildError::SizeCap {
            steps: steps as u64,
            n,
            max,
            signature,
        }),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::girth;

    #[test]
    fn base_is_a_verified_5_5_colouring() {
        let base = base_k5();
        assert_eq!(base.n(), 5);
        assert_eq!(base.k(), 2);
        assert_eq!(base.root(), 0);
        assert_eq!(base.signature(), vec![5, 5]);
        assert_eq!(base.colouring().colour_of(0, 1).unwrap(), 1);
        let report = girth::colouring_odd_girth(base.colouring());
        assert_eq!(report.overall, Some(5));
        assert_eq!(report.per_colour, vec![(1, Some(5)), (2, Some(5))]);
    }

    #[test]
    fn one_doubling_step_gives_the_7_5_9_colouring_of_k9() {
        let step = doubling_step(&base_k5()).unwrap();
        assert_eq!(step.n(), 9);
        assert_eq!(step.k(), 3);
        assert_eq!(step.signature(), vec![7, 5, 9]);
        // exact odd girths match the certified bounds here
        let report = girth::colouring_odd_girth(step.colouring());
        assert_eq!(
            report.per_colour,
            vec![(1, Some(7)), (2, Some(5)), (3, Some(9))]
        );
        assert_eq!(report.overall, Some(5));
    }

    #[test]
    fn doubling_twin_edges_get_the_new_colour() {
        let step = doubling_step(&base_k5()).unwrap();
        let c = step.colouring();
        for x in 1..5u32 {
            assert_eq!(c.colour_of(x, x + 4).unwrap(), 3, "twin pair {{{x}, {x}'}}");
        }
        // untouched colour-2 edges replicate to all four twin combinations
        assert_eq!(c.colour_of(0, 2).unwrap(), 2);
        assert_eq!(c.colour_of(0, 6).unwrap(), 2);
        assert_eq!(c.colour_of(2, 4).unwrap(), 2);
        assert_eq!(c.colour_of(2, 8).unwrap(), 2);
        assert_eq!(c.colour_of(6, 4).unwrap(), 2);
        assert_eq!(c.colour_of(6, 8).unwrap(), 2);
        // the recoloured sweep: root to X_2, Y_l to X_{l+1}, root to Y_5
        assert_eq!(c.colour_of(0, 1).unwrap(), 3);
        assert_eq!(c.colour_of(5, 2).unwrap(), 3);
        assert_eq!(c.colour_of(6, 3).unwrap(), 3);
        assert_eq!(c.colour_of(7, 4).unwrap(), 3);
        assert_eq!(c.colour_of(0, 8).unwrap(), 3);
        // while their mirror images keep colour 1
        assert_eq!(c.colour_of(0, 5).unwrap(), 1);
        assert_eq!(c.colour_of(1, 6).unwrap(), 1);
        assert_eq!(c.colour_of(5, 6).unwrap(), 1);
    }

    #[test]
    fn min_first_moves_a_minimal_colour_to_the_front() {
        let k9 = doubling_step(&base_k5()).unwrap();
        assert_eq!(k9.signature(), vec![7, 5, 9]);
        let relabelled = min_first_relabel(&k9).unwrap();
        assert_eq!(relabelled.signature(), vec![5, 7, 9]);
        // idempotent once minimal
        let again = min_first_relabel(&relabelled).unwrap();
        assert_eq!(again.signature(), vec![5, 7, 9]);
        // ties pick the lowest colour id, so the base is untouched
        let base = base_k5();
        assert_eq!(min_first_relabel(&base).unwrap().signature(), vec![5, 5]);
    }

    #[test]
    fn iterated_build_matches_the_expected_sizes() {
        let b0 = build_iterated(0).unwrap();
        assert_eq!((b0.n(), b0.k()), (5, 2));
        assert_eq!(b0.signature(), vec![5, 5]);
        let b2 = build_iterated(2).unwrap();
        assert_eq!((b2.n(), b2.k()), (17, 4));
        let mut sorted = b2.signature();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![7, 7, 9, 9]);
    }

    #[test]
    fn signature_simulation_matches_builds() {
        for steps in 0..=4u32 {
            let built: Vec<u64> = build_iterated(steps)
                .unwrap()
                .signature()
                .iter()
                .map(|&r| r as u64)
                .collect();
            assert_eq!(iterated_signature(steps), built, "steps = {steps}");
        }
    }

    #[test]
    fn build_to_girth_picks_the_first_sufficient_build() {
        assert_eq!(steps_to_girth(5).unwrap(), 0);
        assert_eq!(steps_to_girth(7).unwrap(), 2);
        let b = build_to_girth(7).unwrap();
        assert_eq!(b.k(), 4);
        assert!(b.signature().iter().all(|&r| r >= 7));
        assert!(matches!(
            build_to_girth(4),
            Err(BuildError::BadTarget { target: 4 })
        ));
        assert!(matches!(
            build_to_girth(3),
            Err(BuildError::BadTarget { target: 3 })
        ));
    }

    #[test]
    fn size_cap_reports_the_unreached_signature() {
        match build_iterated(12) {
            Err(BuildError::SizeCap { steps, n, signature, .. }) => {
                assert_eq!(steps, 12);
                assert_eq!(n, (1u128 << 14) + 1);
                assert_eq!(signature.len(), 14);
                assert_eq!(signature, schedule::signature_at(14).unwrap());
            }
            other => panic!("expected a size-cap error, got {other:?}"),
        }
    }

    #[test]
    fn doubling_rejects_roots_other_than_zero() {
        // build a valid rooted colouring with root 1 by hand: swap the roles
        // of vertices 0 and 1 in the base
        let base = base_k5();
        let colouring = Colouring::from_fn(5, 2, |x, y| {
            let swap = |v: Vertex| match v {
                0 => 1,
                1 => 0,
                other => other,
            };
            base.colouring().colour_of(swap(x), swap(y)).unwrap()
        })
        .unwrap();
        let single = |order: [Vertex; 5]| order.iter().map(|&v| vec![v]).collect::<Vec<_>>();
        let cert = RrcCertificate::new(
            1,
            vec![
                RoundPartition::new(5, single([1, 0, 2, 3, 4])).unwrap(),
                RoundPartition::new(5, single([1, 2, 4, 0, 3])).unwrap(),
            ],
        )
        .unwrap();
        let rooted_at_1 = RrcColouring::new(colouring, cert).unwrap();
        assert!(matches!(
            doubling_step(&rooted_at_1),
            Err(BuildError::RootNotZero { root: 1 })
        ));
    }
}
