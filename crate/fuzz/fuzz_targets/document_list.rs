// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use discurv::doc::{documents_to_json, parse_documents};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(docs) = parse_documents(data) else { return };
    assert!(!docs.is_empty());
    let text = documents_to_json(&docs);
    let back = parse_documents(text.as_bytes()).expect("printed documents parse");
    assert_eq!(back.len(), docs.len());
    for d in &docs {
        let _ = d.curve();
    }
});
