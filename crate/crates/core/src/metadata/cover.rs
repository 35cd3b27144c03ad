use image::RgbImage;

use super::provider::{MetadataProvider, VolumeMeta};

/// Fetches and decodes the cover for `meta` as 8-bit RGB.
///
/// Returns `None` when there is no cover reference or when fetching or
/// decoding fails; failures are logged, never raised.
pub fn load_cover(meta: &VolumeMeta, provider: &dyn MetadataProvider) -> Option<RgbImage> {
    let reference = meta.cover_image.as_deref()?;
    let bytes = match provider.fetch_cover(reference) {
        Ok(bytes) => bytes,
        Err(e) => {
            log::info!("{}: cover unavailable ({e})", meta.isbn13);
            return None;
        }
    };
    decode_cover(&bytes).map_err(|e| log::warn!("{}: cover decode failed: {e}", meta.isbn13)).ok()
}

/// Decodes PNG or JPEG bytes into RGB8.
pub fn decode_cover(bytes: &[u8]) -> Result<RgbImage, image::ImageError> {
    Ok(image::load_from_memory(bytes)?.to_rgb8())
}
