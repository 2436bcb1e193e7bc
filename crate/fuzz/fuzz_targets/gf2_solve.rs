#![no_main]

use bitvec::prelude::*;
use gwcacm::schemes::gf2::{assemble, solve};
use gwcacm::schemes::{CacheUnit, PacketRef, Segment};
use gwcacm::Subset;
use libfuzzer_sys::fuzz_target;

// Each unit: header byte (packet count, length), then one byte per packet,
// then payload bytes.
fuzz_target!(|data: &[u8]| {
    let mut units = Vec::new();
    let mut rest = data;
    while let Some((&head, tail)) = rest.split_first() {
        let count = usize::from(head & 3) + 1;
        let len = usize::from(head >> 2 & 7) + 1;
        if tail.len() < count + 1 {
            break;
        }
        let (refs, tail) = tail.split_at(count);
        let comp = refs
            .iter()
            .map(|b| {
                let denom = u32::from(b >> 6) + 1;
                let index = u32::from(b >> 4 & 3) % denom + 1;
                PacketRef {
                    subset: Subset::CANONICAL[usize::from(b & 7) % 7],
                    segment: [Segment::Whole, Segment::A, Segment::B][usize::from(b >> 3 & 1)],
                    index,
                    denom,
                    start: (index as usize - 1) * len,
                    len,
                }
            })
            .collect();
        let payload = BitVec::<u8, Msb0>::from_slice(&tail[..1])[..len].to_bitvec();
        rest = &tail[1..];
        if let Ok(u) = CacheUnit::new(comp, payload) {
            units.push(u);
        }
    }
    let refs: Vec<&CacheUnit> = units.iter().collect();
    if let Ok(sol) = solve(&refs) {
        for s in Subset::CANONICAL {
            for len in [1, 2, 8, 16] {
                let _ = assemble(&sol, s, len);
            }
        }
    }
});
