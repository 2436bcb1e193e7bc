#![no_main]

use gwcacm::config::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = RunConfig::from_json(text) {
        let _ = cfg.grid_spec();
        let _ = cfg.demand();
        let _ = cfg.tuple();
        if cfg.pmf.is_none() {
            let _ = cfg.resolve_source();
        }
        let _ = cfg.clone().merged(RunConfig::default());
    }
});
