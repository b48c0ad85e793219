//! Raw corpus ingestion: LIAR-format TSV parsing, label binarization,
//! speaker anonymization, canonical record files, and deterministic splits.

mod anonymize;
mod canonical;
mod label;
mod parse;
mod record;
mod split;

pub use anonymize::{anonymize_speakers, SpeakerMap};
pub use canonical::{read_canonical, write_canonical, write_speaker_map, CANONICAL_HEADER};
pub use label::{
    binarize_label, label_distribution, BinaryLabel, DistributionError, LabelDistribution,
    LabelParseError, SixWayLabel,
};
pub use parse::{parse_liar, write_liar_tsv, ParseError, LIAR_COLUMNS};
pub use record::{CanonicalRecord, ClaimRecord, SpeakerCredit};
pub use split::{split_dataset, DatasetSplit, SplitError};

use log::warn;
use std::collections::HashSet;

/// Binarize labels and anonymize speakers, producing canonical records plus
/// the speaker map for audit. Duplicate ids are kept but warned about.
pub fn build_canonical(records: &[ClaimRecord]) -> (Vec<CanonicalRecord>, SpeakerMap) {
    let mut seen = HashSet::new();
    for r in records {
        if !seen.insert(r.id.as_str()) {
            warn!("duplicate record id {:?} kept as-is", r.id);
        }
    }
    let (anonymized, map) = anonymize_speakers(records);
    let canonical = anonymized
        .into_iter()
        .map(|r| CanonicalRecord {
            id: r.id,
            binary_label: binarize_label(r.label),
            statement: r.statement,
            subject: r.subject,
            speaker_id: r.speaker,
            speaker_job: r.speaker_job,
            state_info: r.state_info,
            party_affiliation: r.party_affiliation,
            credit: r.credit,
            context: r.context,
        })
        .collect();
    (canonical, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_canonical_binarizes_and_anonymizes() {
        let rows = vec![
            ClaimRecord::for_tests("a.json", SixWayLabel::True, "claim one", "alice"),
            ClaimRecord::for_tests("b.json", SixWayLabel::PantsFire, "claim two", "bob"),
            ClaimRecord::for_tests("c.json", SixWayLabel::HalfTrue, "claim three", "alice"),
        ];
        let (canonical, map) = build_canonical(&rows);
        assert_eq!(canonical[0].binary_label, BinaryLabel::True);
        assert_eq!(canonical[1].binary_label, BinaryLabel::False);
        assert_eq!(canonical[2].binary_label, BinaryLabel::False);
        assert_eq!(canonical[0].speaker_id, "_0_");
        assert_eq!(canonical[1].speaker_id, "_1_");
        assert_eq!(canonical[2].speaker_id, "_0_");
        assert_eq!(map.len(), 2);
    }
}
