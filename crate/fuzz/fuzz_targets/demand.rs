#![no_main]

use gwcacm::gray_wyner::request_sets;
use gwcacm::{Demand, Subset};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = Demand::parse(text) {
        let shown = d.to_string();
        assert_eq!(Demand::parse(shown.trim_matches(['(', ')'])).unwrap(), d);
        let _ = request_sets(d);
    }
    let _ = Subset::parse(text);
});
