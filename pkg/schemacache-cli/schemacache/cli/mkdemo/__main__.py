#!/usr/bin/env python3

from . writer import run

if __name__ == '__main__':
    run()

