//! Shared fixtures for the benchmarks.

use fracop_core::{KernelFamily, KernelTriple, TripleKind};

pub fn prabhakar_family() -> KernelFamily {
    KernelFamily::Prabhakar {
        alpha: 0.6,
        beta: 1.0,
        gamma: 0.5,
        lambda: 1.0,
    }
}

pub fn caputo_power(alpha: f64) -> KernelTriple {
    fracop_core::kernels::make_triple(
        &TripleKind::CaputoType {
            pair: KernelFamily::PowerLaw { alpha },
        },
        32,
    )
    .expect("valid power-law triple")
}
