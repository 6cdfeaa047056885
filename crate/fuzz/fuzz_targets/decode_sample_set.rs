#![no_main]

use libfuzzer_sys::fuzz_target;
use ugraph_cluster::{decode_sample_set, encode_sample_set};

fuzz_target!(|data: &[u8]| {
    // A successful decode must re-encode to the exact input bytes.
    if let Ok(r) = decode_sample_set(data) {
        assert_eq!(encode_sample_set(&r), data);
    }
});
