#pragma once

#include <functional>
#include <string_view>

namespace trollscope {

using WarningSink = std::function<void(std::string_view)>;

// Warnings go to stderr unless a sink is installed. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace trollscope
