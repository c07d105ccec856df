#ifndef SMRSD_VERSION_HPP
#define SMRSD_VERSION_HPP

namespace smrsd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace smrsd

#endif  // SMRSD_VERSION_HPP
