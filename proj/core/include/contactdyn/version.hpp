#ifndef CONTACTDYN_VERSION_HPP
#define CONTACTDYN_VERSION_HPP

namespace contactdyn {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
