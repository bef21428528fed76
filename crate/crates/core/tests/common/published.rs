//! Published top-10 node lists for a COVID-19 retweet network, plus the
//! five-node proxy validation table. Lists without a published order are
//! kept in the order they were reported.

use spreadrank::rank::RankingTable;
use spreadrank::Metric;

pub const DEGREE: [&str; 10] = ["26", "756", "11019", "11248", "33091", "40327", "64409", "83247", "84148", "142153"];
pub const EIGENVECTOR: [&str; 10] = ["15", "26", "93", "102", "235", "522", "526", "593", "756", "11248"];
pub const BETWEENNESS: [&str; 10] = ["2", "15", "26", "93", "102", "235", "522", "526", "756", "1371"];
pub const CLOSENESS: [&str; 10] = ["4", "5", "6", "14", "28", "42", "43", "62", "66", "83"];

/// PC leaders: nine shared with the degree/eigenvector hubs plus one new node.
pub const PC: [&str; 10] = ["26", "11019", "11248", "15", "33091", "40327", "64409", "83247", "84148", "5398"];
/// Only the three MVC nodes outside every traditional list were published.
pub const MVC_EXCLUSIVE: [&str; 3] = ["101358", "72378", "130371"];
pub const DIC: [&str; 10] = ["49905", "54048", "5958", "18119", "36077", "36393", "37557", "72479", "73960", "85735"];

pub const TRADITIONAL: [Metric; 4] = [Metric::DegreeTotal, Metric::Eigenvector, Metric::Betweenness, Metric::Closeness];

pub fn traditional_rankings() -> Vec<RankingTable> {
    vec![
        RankingTable::from_ordered(Metric::DegreeTotal, &DEGREE),
        RankingTable::from_ordered(Metric::Eigenvector, &EIGENVECTOR),
        RankingTable::from_ordered(Metric::Betweenness, &BETWEENNESS),
        RankingTable::from_ordered(Metric::Closeness, &CLOSENESS),
    ]
}

pub fn all_rankings() -> Vec<RankingTable> {
    let mut r = traditional_rankings();
    r.push(RankingTable::from_ordered(Metric::Pc, &PC));
    r.push(RankingTable::from_ordered(Metric::Mvc, &MVC_EXCLUSIVE));
    r.push(RankingTable::from_ordered(Metric::Dic, &DIC));
    r
}

/// (PC rank, MVC rank, DIC rank, retweets, emotion words) for five nodes.
pub const PROXY_TABLE: [(u32, u32, u32, f64, f64); 5] = [
    (1, 2, 1, 200.0, 30.0),
    (2, 1, 3, 180.0, 45.0),
    (5, 4, 2, 90.0, 20.0),
    (3, 5, 4, 75.0, 15.0),
    (4, 3, 5, 50.0, 5.0),
];
