//! Shared test helpers.

use crate::instance::{PacketId, StateFeedbackMatrix};

pub fn sfm(n_packets: usize, rows: &[&[PacketId]]) -> StateFeedbackMatrix {
    StateFeedbackMatrix::from_rows(n_packets, rows).unwrap()
}
