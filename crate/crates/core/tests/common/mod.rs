#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use chrono::{TimeZone, Utc};
use lcr_core::bots::{BotConfig, Clock, Engine};
use lcr_core::store::SignalStore;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn store() -> SignalStore {
    let mut s = SignalStore::in_memory();
    s.ingest_claimreviews(fixture("claims.jsonl")).unwrap();
    s.ingest_precrawled(fixture("sentences.jsonl")).unwrap();
    s.ingest_sites(fixture("sites.jsonl")).unwrap();
    s
}

pub fn clock() -> Clock {
    Clock::Fixed(Utc.with_ymd_and_hms(2020, 10, 1, 12, 0, 0).unwrap())
}

pub fn engine_with(config: BotConfig) -> Engine {
    Engine::builder(Arc::new(store())).config(config).clock(clock()).build().unwrap()
}

pub fn engine() -> Engine {
    engine_with(BotConfig::default())
}
