#![no_main]

use gwcacm::config::{parse_grid, parse_tuple, GridSpec};
use gwcacm::quantity::Quantity;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(GridSpec::Explicit(v)) = parse_grid(text) {
        let again: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(parse_grid(&again.join(",")).unwrap(), GridSpec::Explicit(v.clone()));
        for b in v {
            let _ = b.render();
        }
    }
    let _ = parse_tuple(text);
});
