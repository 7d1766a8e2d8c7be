#pragma once

#include <squarec/grid.hpp>

#include <filesystem>
#include <string>

namespace squarec {

enum class ShapeFormat {
    pbm_ascii,   ///< P1
    pbm_binary,  ///< P4
    vox3,        ///< "VOX3 w h d\n" + w*h*d bytes of 0/1, x fastest
};

/// Reads a PBM (P1 or P4, auto-detected) or VOX3 file.
///
/// A one-cell margin is added when the stored mask touches its border. Throws
/// ParseError on malformed content, DataError on an empty mask, IoError when the file
/// cannot be opened.
BinaryShape load_shape(const std::filesystem::path& path);

/// Writes 2-D shapes as PBM, 3-D shapes as VOX3. The file is written to a temporary
/// sibling and renamed into place.
void save_shape(const BinaryShape& shape, const std::filesystem::path& path,
                ShapeFormat format = ShapeFormat::pbm_binary);

/// Writes `content` to `path` via temp file + rename. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace squarec
