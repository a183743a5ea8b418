#pragma once

#include "dnastore/bytes.hpp"
#include "dnastore/channel.hpp"
#include "dnastore/codebook.hpp"
#include "dnastore/codec.hpp"
#include "dnastore/container.hpp"
#include "dnastore/error.hpp"
#include "dnastore/image.hpp"
#include "dnastore/metrics.hpp"
#include "dnastore/network.hpp"
#include "dnastore/nucleotide.hpp"
#include "dnastore/pipeline.hpp"
#include "dnastore/quantizer.hpp"
#include "dnastore/random.hpp"
#include "dnastore/reference_transform.hpp"
#include "dnastore/weights_io.hpp"
