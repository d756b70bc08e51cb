#![no_main]

use libfuzzer_sys::fuzz_target;
use voxfeed_core::feed::decode_document;

fuzz_target!(|data: &[u8]| {
    let _ = decode_document(data);
});
