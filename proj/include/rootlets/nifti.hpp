// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>

#include "rootlets/volume.hpp"

namespace rootlets {

// NIfTI-1 single-file I/O (.nii and .nii.gz). Supported datatypes: uint8,
// int16, int32, float32, float64. sform preferred over qform; plain
// spacing-diagonal affine when neither is set. Extensions are skipped.
Volume3D read_nifti(const std::filesystem::path& path);

// Serializes with sform_code=1 (srow from the affine), qform_code=0,
// vox_offset=352. Gzip container when the path ends in ".nii.gz".
void write_nifti(const Volume3D& vol, const std::filesystem::path& path);

template <typename T>
void write_nifti(const Grid<T>& g, const std::filesystem::path& path) {
  write_nifti(Volume3D::from(g), path);
}

}  // namespace rootlets
