#ifndef EBGAS_VERSION_HPP
#define EBGAS_VERSION_HPP

namespace ebgas {
inline constexpr const char* version_string = "0.1.0";
}

#endif
