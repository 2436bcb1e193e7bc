#![no_main]

use gwcacm::source_model::{entropy_profile_pmf, PmfSource};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(src) = PmfSource::from_json(text) {
        let h = entropy_profile_pmf(&src).expect("validated pmf has a profile");
        assert!(h.h_triple.is_finite() && h.h_triple >= -1e-9);
    }
});
