import os
import sys

ext_dir = os.environ.get("SLTC_EXT_DIR")
src_dir = os.environ.get("SLTC_SOURCE_DIR")
if ext_dir:
    # the package sources plus the freshly built extension
    sys.path.insert(0, os.path.join(src_dir, "python") if src_dir else "python")
    sys.path.insert(0, ext_dir)
