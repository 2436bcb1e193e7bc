//! Placement, delivery and decoding for the three sublibraries.
//!
//! Each scheme is first laid out symbolically (which packets are XORed into
//! which unit), then materialized against the descriptions. Receivers decode
//! with the generic GF(2) solver in [`gf2`].

pub mod gf2;
pub mod l1;
pub mod l2;
pub mod l3;
pub mod packet;
pub mod sharing;

pub use l1::{l1_decode, l1_deliver, l1_place, L1Corner, L1Scheme};
pub use l2::{l2_decode, l2_deliver, l2_place, L2Corner, L2Scheme};
pub use l3::{l3_deliver, l3_place, L3Scheme};
pub use packet::{CacheContents, CacheUnit, MulticastCodeword, PacketRef, Segment};
pub use sharing::{Share, SharingPlan};

use crate::error::{Error, Result};
use crate::source_model::BitString;
use crate::subset::{Receiver, Subset};

/// Decodes the wanted descriptions at receiver `r` from its cache and the codeword.
pub fn decode_at(
    r: Receiver,
    caches: &CacheContents,
    codeword: &MulticastCodeword,
    wanted: &[(Subset, usize)],
) -> Result<Vec<BitString>> {
    let units: Vec<&CacheUnit> = caches.of(r).iter().chain(codeword.units.iter()).collect();
    gf2::decode_descriptions(&units, wanted)
}

pub(crate) fn check_budget(name: &str, caches: &CacheContents, budget: u64) -> Result<()> {
    for r in Receiver::BOTH {
        if caches.used(r) != budget {
            return Err(Error::Mismatch(format!(
                "{name} caches at {r} hold {} bits, scheme budget is {budget}",
                caches.used(r)
            )));
        }
    }
    Ok(())
}
