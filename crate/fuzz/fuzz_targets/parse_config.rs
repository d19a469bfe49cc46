#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = frenet_ife::config::parse_config(text) {
            let again = frenet_ife::config::parse_config(&cfg.to_toml().unwrap()).unwrap();
            assert_eq!(cfg, again);
        }
    }
});
