use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One ensemble member's forecast track; `points[s]` is the position at step `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Track {
    pub id: String,
    pub member: i64,
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestTrackPoint {
    pub timestamp: String,
    pub lon: f64,
    pub lat: f64,
}

impl BestTrackPoint {
    pub fn position(&self) -> [f64; 2] {
        [self.lon, self.lat]
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrackDataset {
    pub tracks: Vec<Track>,
    pub best_track: Option<Vec<BestTrackPoint>>,
}

impl TrackDataset {
    pub fn point_count(&self) -> usize {
        self.tracks.iter().map(|t| t.points.len()).sum()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TrackRow {
    track_id: String,
    member: i64,
    step: i64,
    lon: f64,
    lat: f64,
}

fn parse_error(err: csv::Error) -> Error {
    match err.position().map(|p| p.line()) {
        Some(line) => Error::Parse { line, message: err.to_string() },
        None => Error::Csv(err),
    }
}

/// Deserializes every data row, pairing it with its 1-based line number.
fn read_rows<T: serde::de::DeserializeOwned>(text: &str) -> Result<Vec<(u64, T)>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(parse_error)?.clone();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(parse_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::Parse { line, message: e.to_string() })?;
        rows.push((line, row));
    }
    Ok(rows)
}

fn check_position(line: u64, lon: f64, lat: f64) -> Result<()> {
    if lon.is_finite() && lat.is_finite() {
        Ok(())
    } else {
        Err(Error::Parse { line, message: "non-finite coordinate".into() })
    }
}

/// Parses a track table with columns `track_id,member,step,lon,lat`.
///
/// Rows of one track must list steps `0, 1, 2, …` in order; rows of
/// different tracks may interleave. Tracks keep the order of first appearance.
pub fn parse_tracks(text: &str) -> Result<TrackDataset> {
    let mut tracks: Vec<Track> = Vec::new();
    for (line, row) in read_rows::<TrackRow>(text)? {
        check_position(line, row.lon, row.lat)?;
        let index = match tracks.iter().position(|t| t.id == row.track_id) {
            Some(i) => i,
            None => {
                tracks.push(Track { id: row.track_id.clone(), member: row.member, points: Vec::new() });
                tracks.len() - 1
            }
        };
        let track = &mut tracks[index];
        if track.member != row.member {
            return Err(Error::Parse { line, message: format!("track {} changes member from {} to {}", track.id, track.member, row.member) });
        }
        let expected = track.points.len() as i64;
        if row.step != expected {
            return Err(Error::NonContiguousSteps { track: row.track_id, expected, found: row.step });
        }
        track.points.push([row.lon, row.lat]);
    }
    Ok(TrackDataset { tracks, best_track: None })
}

/// Writes the track table parsed by [`parse_tracks`].
pub fn serialize_tracks(ds: &TrackDataset) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for track in &ds.tracks {
        for (step, p) in track.points.iter().enumerate() {
            writer.serialize(TrackRow { track_id: track.id.clone(), member: track.member, step: step as i64, lon: p[0], lat: p[1] })?;
        }
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Parses a reference track with columns `timestamp,lon,lat`.
pub fn parse_best_track(text: &str) -> Result<Vec<BestTrackPoint>> {
    let mut out = Vec::new();
    for (line, point) in read_rows::<BestTrackPoint>(text)? {
        check_position(line, point.lon, point.lat)?;
        out.push(point);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_TRACKS: &str = "track_id,member,step,lon,lat\nP,0,0,0,0\nP,0,1,0,0\nP,0,2,0,0\nQ,1,0,1,0\nQ,1,1,1,0\nQ,1,2,2,0\n";

    #[test]
    fn parses_two_tracks() {
        let ds = parse_tracks(TWO_TRACKS).unwrap();
        assert_eq!(ds.tracks.len(), 2);
        assert_eq!(ds.point_count(), 6);
        assert_eq!(ds.tracks[1].points[2], [2.0, 0.0]);
        assert_eq!(ds.tracks[1].member, 1);
    }

    #[test]
    fn round_trip() {
        let ds = parse_tracks(TWO_TRACKS).unwrap();
        let text = serialize_tracks(&ds).unwrap();
        assert_eq!(parse_tracks(&text).unwrap(), ds);
    }

    #[test]
    fn interleaved_rows() {
        let text = "track_id,member,step,lon,lat\nA,0,0,1,1\nB,1,0,2,2\nA,0,1,3,3\nB,1,1,4,4\n";
        let ds = parse_tracks(text).unwrap();
        assert_eq!(ds.tracks[0].points, vec![[1.0, 1.0], [3.0, 3.0]]);
    }

    #[test]
    fn gap_in_steps() {
        let text = "track_id,member,step,lon,lat\nA,0,0,1,1\nA,0,2,3,3\n";
        let err = parse_tracks(text).unwrap_err();
        assert!(err.to_string().contains("non-contiguous steps in track A"), "{err}");
    }

    #[test]
    fn malformed_row_names_line() {
        let text = "track_id,member,step,lon,lat\nA,0,0,1,1\nA,0,1,east,3\n";
        match parse_tracks(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let text = "track_id,member,step,lon,lat\nA,0,0,1,NaN\n";
        assert!(matches!(parse_tracks(text), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn best_track() {
        let points = parse_best_track("timestamp,lon,lat\n2020-09-24T00:00Z,140.5,30.25\n").unwrap();
        assert_eq!(points[0].position(), [140.5, 30.25]);
        assert!(parse_best_track("timestamp,lon,lat\nt,1\n").is_err());
    }
}
