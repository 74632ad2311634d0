#pragma once

// Convenience umbrella: pulls in the whole library.

#include "longsum/backend.hpp"
#include "longsum/common.hpp"
#include "longsum/dataset.hpp"
#include "longsum/frequency.hpp"
#include "longsum/pipeline.hpp"
#include "longsum/rouge.hpp"
#include "longsum/stopwords.hpp"
#include "longsum/text.hpp"
#include "longsum/textrank.hpp"
