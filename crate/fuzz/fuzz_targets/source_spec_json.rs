#![no_main]

use gwcacm::source_model::{entropy_profile_structured, SourceSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = SourceSpec::from_json(text) {
        assert!(spec.validate().is_ok());
        let h = entropy_profile_structured(&spec);
        assert!(h.h_single <= h.h_pair && h.h_pair <= h.h_triple);
    }
});
