#![no_main]

use bitvec::prelude::*;
use gwcacm::gray_wyner::{gw_decode, RateTuple};
use gwcacm::quantity::bits;
use gwcacm::{FileId, Subset};
use libfuzzer_sys::fuzz_target;

// Layout: file, three rates, then (subset, length) pairs; payload bits come
// from the remaining bytes.
fuzz_target!(|data: &[u8]| {
    if data.len() < 4 {
        return;
    }
    let Ok(file) = FileId::new(u64::from(data[0] % 4)) else {
        return;
    };
    let tuple = RateTuple::new(bits(data[1].into()), bits(data[2].into()), bits(data[3].into())).unwrap();
    let rest = &data[4..];
    let n = rest.len().min(16) / 2;
    let pool = BitVec::<u8, Msb0>::from_slice(&rest[2 * n..]);
    let mut parts = Vec::new();
    for pair in rest[..2 * n].chunks(2) {
        let subset = Subset::CANONICAL[usize::from(pair[0]) % 7];
        let len = usize::from(pair[1]).min(pool.len());
        parts.push((subset, &pool[..len]));
    }
    if let Ok(x) = gw_decode(file, &tuple, &parts) {
        let want: usize = parts.iter().map(|(_, b)| b.len()).sum();
        assert_eq!(x.len(), want);
    }
});
