//! Fixtures shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use fracop_core::kernels::make_triple;
use fracop_core::{GeneralizedPowerSeries as Series, KernelFamily, KernelTriple, OperatorContext, TripleKind};
use rand::rngs::StdRng;
use rand::Rng;

pub const ORDER: usize = 32;

pub fn power(alpha: f64) -> KernelFamily {
    KernelFamily::PowerLaw { alpha }
}

pub fn prabhakar(lambda: f64) -> KernelFamily {
    KernelFamily::Prabhakar {
        alpha: 0.6,
        beta: 1.0,
        gamma: 0.5,
        lambda,
    }
}

pub fn bessel() -> KernelFamily {
    KernelFamily::Bessel { alpha: 0.5 }
}

pub fn triple(kind: TripleKind) -> KernelTriple {
    make_triple(&kind, ORDER).unwrap_or_else(|e| panic!("{kind:?}: {e}"))
}

/// Triples exercised by the fundamental-theorem checks.
pub fn catalog_triples() -> Vec<KernelTriple> {
    let mut kinds = Vec::new();
    for alpha in [0.1, 0.5, 0.9] {
        kinds.push(TripleKind::RlType { pair: power(alpha) });
        kinds.push(TripleKind::CaputoType { pair: power(alpha) });
    }
    kinds.push(TripleKind::HilferPower {
        alpha: 0.5,
        gamma: 0.25,
    });
    for lambda in [1.0, -1.0] {
        kinds.push(TripleKind::RlType {
            pair: prabhakar(lambda),
        });
        kinds.push(TripleKind::CaputoType {
            pair: prabhakar(lambda),
        });
    }
    kinds.push(TripleKind::RlType { pair: bessel() });
    kinds.push(TripleKind::CaputoType { pair: bessel() });
    kinds.push(TripleKind::Split {
        pair: power(0.5),
        gamma: 0.25,
    });
    kinds.push(TripleKind::Split {
        pair: prabhakar(1.0),
        gamma: 0.2,
    });
    kinds.into_iter().map(triple).collect()
}

/// Random `sum c_i h_(mu_i)` with 1 to 5 terms, exponents in `[lo, lo + 3]`.
pub fn random_function(rng: &mut StdRng, lo: f64) -> Series {
    let n = rng.random_range(1..=5);
    let terms: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(-2.0..2.0), lo + rng.random_range(0.0..3.0)))
        .collect();
    Series::from_terms(0.0, terms, f64::INFINITY).unwrap()
}

/// Coefficient error of `lhs - rhs` relative to `max(1, max |coeff of f|)`.
pub fn relative_gap(lhs: &Series, rhs: &Series, f: &Series) -> f64 {
    lhs.max_abs_diff(rhs) / f.max_abs_coeff().max(1.0)
}

/// `(D^<n> I^<n> f - f, I^<n> D^<n> f - (f - projection))` as relative gaps.
pub fn fundamental_theorem_gaps(ctx: &OperatorContext, f: &Series, n: usize) -> (f64, f64) {
    let integrated = ctx.gfi_nfold(f, n).unwrap();
    let first = ctx.gfd_nfold(&integrated, n).unwrap();
    let derived = ctx.gfd_nfold(f, n).unwrap();
    let second = ctx.gfi_nfold(&derived, n).unwrap();
    let projection = ctx.projector_nfold(f, n).unwrap();
    let expected = f.sub(&projection.function);
    (relative_gap(&first, f, f), relative_gap(&second, &expected, f))
}
